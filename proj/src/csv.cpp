#include "regimecast/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace regimecast {

std::string fmt_num(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  std::string s(buf);
  return s == "-0" ? "0" : s;
}

void write_forecast_csv(std::ostream& os, const ForecastPath& path) {
  os << "date,forecast\n";
  for (int h = 1; h <= path.horizon(); ++h) os << path.date(h).str() << ',' << fmt_num(path.values(h - 1)) << '\n';
  os << "average," << fmt_num(path.average()) << '\n';
}

}  // namespace regimecast
