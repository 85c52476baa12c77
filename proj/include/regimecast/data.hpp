#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <compare>
#include <string>
#include <string_view>
#include <utility>

#include "regimecast/error.hpp"

namespace regimecast {

/// Calendar month. Arithmetic is in whole months.
struct MonthDate {
  int year = 1960;
  int month = 1;

  constexpr MonthDate() = default;
  constexpr MonthDate(int y, int m) : year(y), month(m) {}

  /// Months since year 0, used for ordering and differences.
  constexpr int ordinal() const { return year * 12 + (month - 1); }
  static constexpr MonthDate from_ordinal(int k) {
    int y = k >= 0 ? k / 12 : -((11 - k) / 12);
    return {y, k - y * 12 + 1};
  }

  constexpr MonthDate operator+(int months) const { return from_ordinal(ordinal() + months); }
  constexpr MonthDate operator-(int months) const { return from_ordinal(ordinal() - months); }
  constexpr int operator-(const MonthDate& o) const { return ordinal() - o.ordinal(); }
  constexpr MonthDate& operator++() { return *this = *this + 1; }

  constexpr bool operator==(const MonthDate& o) const { return ordinal() == o.ordinal(); }
  constexpr auto operator<=>(const MonthDate& o) const { return ordinal() <=> o.ordinal(); }

  /// "YYYY-MM".
  std::string str() const;
  /// Accepts "YYYY-MM", "YYYY-MM-DD", "M/D/YYYY" and "YYYYMmm" (e.g. 1973M01).
  static MonthDate parse(std::string_view text);
};

/// Number of months in the inclusive range [from, to].
constexpr int months_inclusive(MonthDate from, MonthDate to) { return to - from + 1; }

/// A dated, gap-free monthly vector. Used both for price levels and for
/// derived inflation rates (see InflationSeries).
template <typename Scalar = double>
struct MonthlySeries {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  MonthDate start;
  Vector values;
  std::string name;

  Eigen::Index size() const { return values.size(); }
  MonthDate end() const { return start + static_cast<int>(values.size()) - 1; }
  MonthDate date_at(Eigen::Index i) const { return start + static_cast<int>(i); }
  bool contains(MonthDate d) const { return d >= start && d <= end(); }

  Eigen::Index index_of(MonthDate d) const {
    if (!contains(d))
      throw Error(Errc::OutOfRange, name + ": " + d.str() + " outside " + start.str() + ".." + end().str());
    return d - start;
  }
  Scalar at(MonthDate d) const { return values(index_of(d)); }
};

/// Annualized percent growth; same layout as a level series.
template <typename Scalar = double>
using InflationSeries = MonthlySeries<Scalar>;

using Series = MonthlySeries<double>;

/// Reads one column from a comma-separated vintage file. A FRED-MD transform
/// code row directly below the header is skipped; leading and trailing
/// missing entries (empty or "NA") are trimmed.
Series load_vintage(const std::string& path, const std::string& series_id);

/// 1200 * (ln x[t] - ln x[t-1]); the result starts one month after the input.
template <typename Scalar>
InflationSeries<Scalar> annualized_log_diff(const MonthlySeries<Scalar>& level) {
  if (level.size() < 2) throw Error(Errc::TooShort, level.name + ": need at least two levels");
  if ((level.values.array() <= Scalar(0)).any())
    throw Error(Errc::NonPositiveLevel, level.name + ": levels must be strictly positive");
  InflationSeries<Scalar> out;
  out.start = level.start + 1;
  out.name = level.name;
  const auto n = level.size() - 1;
  out.values = Scalar(1200) * (level.values.tail(n).array().log() - level.values.head(n).array().log()).matrix();
  return out;
}

/// Inverse of annualized_log_diff given the level one month before growth.start.
template <typename Scalar>
MonthlySeries<Scalar> levels_from_growth(Scalar first_level, const InflationSeries<Scalar>& growth) {
  MonthlySeries<Scalar> out;
  out.start = growth.start - 1;
  out.name = growth.name;
  out.values.resize(growth.size() + 1);
  out.values(0) = first_level;
  Scalar log_level = std::log(first_level);
  for (Eigen::Index i = 0; i < growth.size(); ++i) {
    log_level += growth.values(i) / Scalar(1200);
    out.values(i + 1) = std::exp(log_level);
  }
  return out;
}

/// Inclusive window copy.
template <typename Scalar>
MonthlySeries<Scalar> slice(const MonthlySeries<Scalar>& s, MonthDate from, MonthDate to) {
  if (from > to) throw Error(Errc::OutOfRange, "slice: from after to");
  if (!s.contains(from) || !s.contains(to))
    throw Error(Errc::OutOfRange,
                s.name + ": slice " + from.str() + ".." + to.str() + " outside " + s.start.str() + ".." + s.end().str());
  MonthlySeries<Scalar> out;
  out.start = from;
  out.name = s.name;
  out.values = s.values.segment(from - s.start, months_inclusive(from, to));
  return out;
}

/// Appends `tail` to `head`; tail must start the month after head ends.
template <typename Scalar>
MonthlySeries<Scalar> concat(const MonthlySeries<Scalar>& head, const MonthlySeries<Scalar>& tail) {
  if (tail.start != head.end() + 1)
    throw Error(Errc::InternalGap, head.name + ": appended block starts " + tail.start.str() + ", expected " +
                                       (head.end() + 1).str());
  MonthlySeries<Scalar> out = head;
  out.values.resize(head.size() + tail.size());
  out.values << head.values, tail.values;
  return out;
}

/// Restricts two series to their common calendar span.
template <typename Scalar>
std::pair<MonthlySeries<Scalar>, MonthlySeries<Scalar>> align(const MonthlySeries<Scalar>& a,
                                                              const MonthlySeries<Scalar>& b) {
  const MonthDate lo = std::max(a.start, b.start);
  const MonthDate hi = std::min(a.end(), b.end());
  if (lo > hi) throw Error(Errc::OutOfRange, a.name + " and " + b.name + " do not overlap");
  return {slice(a, lo, hi), slice(b, lo, hi)};
}

}  // namespace regimecast
