#include "regimecast/data.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace regimecast {

const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::SeriesNotFound: return "SeriesNotFound";
    case Errc::InternalGap: return "InternalGap";
    case Errc::MalformedDate: return "MalformedDate";
    case Errc::NonPositiveLevel: return "NonPositiveLevel";
    case Errc::TooShort: return "TooShort";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::DegenerateSample: return "DegenerateSample";
    case Errc::InsufficientHistory: return "InsufficientHistory";
    case Errc::ZeroMass: return "ZeroMass";
    case Errc::NoFeasibleBandwidth: return "NoFeasibleBandwidth";
    case Errc::LabelDegeneracy: return "LabelDegeneracy";
    case Errc::SingularR: return "SingularR";
    case Errc::NonStationaryBelief: return "NonStationaryBelief";
    case Errc::MissingPersona: return "MissingPersona";
    case Errc::EmptyText: return "EmptyText";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

std::string MonthDate::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

namespace {

std::optional<int> to_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.emplace_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool looks_like_date(const std::string& cell) {
  try {
    MonthDate::parse(cell);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "NA" || cell == "NaN" || cell == "."; }

}  // namespace

MonthDate MonthDate::parse(std::string_view text) {
  auto bad = [&] { return Error(Errc::MalformedDate, "cannot parse date '" + std::string(text) + "'"); };
  std::string_view t = trim(text);
  std::optional<int> y, m;
  if (auto slash = t.find('/'); slash != std::string_view::npos) {
    // M/D/YYYY
    auto slash2 = t.find('/', slash + 1);
    if (slash2 == std::string_view::npos) throw bad();
    m = to_int(t.substr(0, slash));
    auto d = to_int(t.substr(slash + 1, slash2 - slash - 1));
    y = to_int(t.substr(slash2 + 1));
    if (!d || *d < 1 || *d > 31) throw bad();
  } else if (auto mpos = t.find_first_of("Mm"); mpos != std::string_view::npos) {
    y = to_int(t.substr(0, mpos));
    m = to_int(t.substr(mpos + 1));
  } else if (auto dash = t.find('-'); dash != std::string_view::npos) {
    y = to_int(t.substr(0, dash));
    auto rest = t.substr(dash + 1);
    auto dash2 = rest.find('-');
    m = to_int(rest.substr(0, dash2));
    if (dash2 != std::string_view::npos) {
      auto d = to_int(rest.substr(dash2 + 1));
      if (!d || *d < 1 || *d > 31) throw bad();
    }
  }
  if (!y || !m || *m < 1 || *m > 12 || *y < 1000 || *y > 9999) throw bad();
  return {*y, *m};
}

Series load_vintage(const std::string& path, const std::string& series_id) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, path);

  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::SeriesNotFound, series_id + " (empty file " + path + ")");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
  const auto header = split_csv_line(line);
  std::size_t col = 0;
  for (std::size_t j = 1; j < header.size(); ++j)
    if (header[j] == series_id) col = j;
  if (col == 0) throw Error(Errc::SeriesNotFound, series_id + " in " + path);

  std::vector<MonthDate> dates;
  std::vector<std::optional<double>> cells;
  bool first_row = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto row = split_csv_line(line);
    if (first_row) {
      first_row = false;
      bool codes = row.size() > 1 && !looks_like_date(row[0]);
      for (std::size_t j = 1; j < row.size() && codes; ++j) {
        auto v = to_int(row[j]);
        codes = v && *v >= 1 && *v <= 7;
      }
      if (codes) continue;
    }
    dates.push_back(MonthDate::parse(row.empty() ? std::string_view{} : std::string_view(row[0])));
    std::string_view cell = col < row.size() ? std::string_view(row[col]) : std::string_view{};
    if (is_missing(cell)) {
      cells.emplace_back();
    } else {
      double v = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || p != cell.data() + cell.size() || !std::isfinite(v))
        throw Error(Errc::InvalidArgument, series_id + ": non-numeric value '" + std::string(cell) + "' at " + dates.back().str());
      cells.emplace_back(v);
    }
  }

  std::size_t lo = 0, hi = cells.size();
  while (lo < hi && !cells[lo]) ++lo;
  while (hi > lo && !cells[hi - 1]) --hi;
  if (lo == hi) throw Error(Errc::SeriesNotFound, series_id + " has no observations in " + path);

  Series s;
  s.name = series_id;
  s.start = dates[lo];
  s.values.resize(static_cast<Eigen::Index>(hi - lo));
  for (std::size_t i = lo; i < hi; ++i) {
    if (!cells[i]) throw Error(Errc::InternalGap, series_id + " missing at " + dates[i].str());
    if (dates[i] != s.start + static_cast<int>(i - lo))
      throw Error(Errc::InternalGap, series_id + ": calendar jumps at " + dates[i].str());
    s.values(static_cast<Eigen::Index>(i - lo)) = *cells[i];
  }
  return s;
}

}  // namespace regimecast
