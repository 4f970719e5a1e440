#pragma once

#include <cmath>
#include <string>
#include <vector>

// Closed-orbit families with L/a < 20: label, launch angle in degrees, and
// every printed recurrence length in units of a. Values are kept as printed
// so a comparison can use the precision of each entry.
struct TableOneRow {
  int i_bar;
  int j_bar;
  std::string angle_deg;
  std::vector<std::string> lengths;
};

// One unit in the last printed digit: "16.5" -> 0.1, "3.00" -> 0.01.
inline double printed_precision(const std::string& v) {
  const auto dot = v.find('.');
  if (dot == std::string::npos) return 1.0;
  return std::pow(10.0, -static_cast<double>(v.size() - dot - 1));
}

inline const std::vector<TableOneRow>& table_one() {
  static const std::vector<TableOneRow> rows = {
      {2, 0, "0.0", {"3.00", "6.00", "9.00", "12.00", "15.00", "18.00"}},
      {13, 1, "2.5", {"19.52"}},
      {11, 1, "3.0", {"16.52"}},
      {9, 1, "3.7", {"13.53"}},
      {7, 1, "4.7", {"10.53"}},
      {12, 2, "5.5", {"18.08"}},
      {5, 1, "6.6", {"7.55", "15.10"}},
      {13, 3, "7.6", {"19.67"}},
      {8, 2, "8.2", {"12.12"}},
      {11, 3, "8.9", {"16.70"}},
      {3, 1, "10.9", {"4.58", "9.16", "13.75", "18.33"}},
      {13, 5, "12.5", {"19.97"}},
      {10, 4, "13.0", {"15.39"}},
      {7, 3, "14.0", {"10.82"}},
      {11, 5, "14.7", {"17.06"}},
      {4, 2, "16.1", {"6.24", "12.49", "18.73"}},
      {9, 5, "17.8", {"14.18"}},
      {5, 3, "19.1", {"7.94", "15.87"}},
      {11, 7, "20.2", {"17.58"}},
      {6, 4, "21.1", {"9.64", "19.28"}},
      {7, 5, "22.4", {"11.36"}},
      {8, 6, "23.4", {"13.08"}},
      {9, 7, "24.2", {"14.80"}},
      {10, 8, "24.8", {"16.5"}},
      {11, 9, "25.3", {"18.24"}},
      {12, 10, "25.7", {"19.97"}},
      {1, 1, "30.0", {"1.73", "3.46", "5.20", "6.93", "8.66", "10.40", "12.12", "13.86", "15.59", "17.32", "19.05"}},
  };
  return rows;
}
