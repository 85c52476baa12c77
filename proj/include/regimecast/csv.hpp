#pragma once

#include <iosfwd>
#include <string>

#include "regimecast/arma.hpp"

namespace regimecast {

/// Six significant digits, no locale, "nan" for non-finite values.
std::string fmt_num(double v);

/// date,forecast rows for h = 1..H followed by an "average" row.
void write_forecast_csv(std::ostream& os, const ForecastPath& path);

}  // namespace regimecast
