#pragma once

// Time-series CSV input and its conversion to prism scenes.
//
// Header: object_id,timestamp,a1,a2,a3[,a4][,stage]
// With four coefficients, coefficient a(k+1) belongs to stage k
// (0 absence, 1 alarm, 2 resistance, 3 exhaustion) and the series is split
// into a {3,2,1} prism and a {2,1,0} prism.

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simplexviz/geometry.hpp"
#include "simplexviz/scene.hpp"

namespace simplexviz {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SampleRow {
  std::string object_id;
  double timestamp = 0.0;  // epoch seconds when given as ISO-8601
  std::vector<double> coefficients;
  std::optional<int> stage;
  friend bool operator==(const SampleRow&, const SampleRow&) = default;
};

namespace detail {

/// RFC 4180 records: quoted fields, doubled quotes, CRLF or LF line ends.
inline std::vector<std::vector<std::string>> csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty()) throw CsvError("line " + std::to_string(line) + ": stray quote inside field");
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (field_started || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      field_started = false;
      ++line;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw CsvError("unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<int> parse_digits(std::string_view s, std::size_t count) {
  if (s.size() != count) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace detail

/// Accepts a plain real or ISO-8601 "YYYY-MM-DD[THH:MM[:SS[.fff]]][Z|+HH:MM|-HH:MM]".
inline double parse_timestamp(std::string_view raw) {
  const std::string_view s = detail::trim(raw);
  if (auto v = detail::parse_real(s)) return *v;
  const auto bad = [&] { return CsvError("unrecognized timestamp '" + std::string(raw) + "'"); };
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') throw bad();
  const auto year = detail::parse_digits(s.substr(0, 4), 4);
  const auto month = detail::parse_digits(s.substr(5, 2), 2);
  const auto day = detail::parse_digits(s.substr(8, 2), 2);
  if (!year || !month || !day) throw bad();
  const std::chrono::year_month_day ymd{std::chrono::year{*year}, std::chrono::month{static_cast<unsigned>(*month)},
                                        std::chrono::day{static_cast<unsigned>(*day)}};
  if (!ymd.ok()) throw bad();
  double seconds = static_cast<double>(std::chrono::sys_days{ymd}.time_since_epoch().count()) * 86400.0;

  std::string_view rest = s.substr(10);
  if (rest.empty()) return seconds;
  if (rest.front() != 'T' && rest.front() != ' ') throw bad();
  rest.remove_prefix(1);
  if (rest.size() < 5 || rest[2] != ':') throw bad();
  const auto hh = detail::parse_digits(rest.substr(0, 2), 2);
  const auto mm = detail::parse_digits(rest.substr(3, 2), 2);
  if (!hh || !mm || *hh > 23 || *mm > 59) throw bad();
  seconds += *hh * 3600.0 + *mm * 60.0;
  rest.remove_prefix(5);
  if (!rest.empty() && rest.front() == ':') {
    if (rest.size() < 3) throw bad();
    const auto ss = detail::parse_digits(rest.substr(1, 2), 2);
    if (!ss || *ss > 60) throw bad();
    seconds += *ss;
    rest.remove_prefix(3);
    if (!rest.empty() && rest.front() == '.') {
      std::size_t n = 1;
      while (n < rest.size() && rest[n] >= '0' && rest[n] <= '9') ++n;
      if (n == 1) throw bad();
      seconds += *detail::parse_real("0" + std::string(rest.substr(0, n)));
      rest.remove_prefix(n);
    }
  }
  if (rest.empty() || rest == "Z") return seconds;
  if ((rest.front() == '+' || rest.front() == '-') && rest.size() == 6 && rest[3] == ':') {
    const auto oh = detail::parse_digits(rest.substr(1, 2), 2);
    const auto om = detail::parse_digits(rest.substr(4, 2), 2);
    if (!oh || !om) throw bad();
    const double offset = *oh * 3600.0 + *om * 60.0;
    return rest.front() == '+' ? seconds - offset : seconds + offset;
  }
  throw bad();
}

/// Parses the whole file. Throws CsvError on schema or value problems.
inline std::vector<SampleRow> read_samples(std::string_view text) {
  const auto records = detail::csv_records(text);
  if (records.empty()) throw CsvError("missing header");
  std::vector<std::string> header;
  for (const auto& h : records.front()) header.emplace_back(detail::trim(h));
  if (!header.empty() && header.front().rfind("\xEF\xBB\xBF", 0) == 0) header.front().erase(0, 3);

  const std::vector<std::string> base{"object_id", "timestamp", "a1", "a2", "a3"};
  if (header.size() < base.size() || !std::equal(base.begin(), base.end(), header.begin())) {
    throw CsvError("header must start with object_id,timestamp,a1,a2,a3");
  }
  std::size_t arity = 3;
  bool has_stage = false;
  std::size_t next = base.size();
  if (next < header.size() && header[next] == "a4") {
    arity = 4;
    ++next;
  }
  if (next < header.size() && header[next] == "stage") {
    has_stage = true;
    ++next;
  }
  if (next != header.size()) throw CsvError("unexpected header column '" + header[next] + "'");

  std::vector<SampleRow> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "row " + std::to_string(r) + ": ";
    if (rec.size() != header.size()) {
      throw CsvError(where + "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(rec.size()));
    }
    SampleRow row;
    row.object_id = std::string(detail::trim(rec[0]));
    try {
      row.timestamp = parse_timestamp(rec[1]);
    } catch (const CsvError& e) {
      throw CsvError(where + e.what());
    }
    for (std::size_t k = 0; k < arity; ++k) {
      const auto v = detail::parse_real(rec[2 + k]);
      if (!v) throw CsvError(where + "coefficient a" + std::to_string(k + 1) + " is not a number");
      row.coefficients.push_back(*v);
    }
    try {
      CoefficientVector check(row.coefficients);
    } catch (const GeometryError& e) {
      throw CsvError(where + e.what());
    }
    if (has_stage) {
      const std::string_view field = detail::trim(rec[2 + arity]);
      if (!field.empty()) {
        const auto st = detail::parse_digits(field, 1);
        if (!st || *st > 3) throw CsvError(where + "stage must be 0..3");
        row.stage = *st;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline constexpr double kCsvSimplexEdge = 100.0;

/// Marker colors by stage: absence green through exhaustion red.
inline const std::vector<std::string>& stage_palette() {
  static const std::vector<std::string> palette{"#07F70B", "#F7F307", "#E0841B", "#E01B1B"};
  return palette;
}

/// Marker colors by dominant side for plain three-pattern series.
inline const std::vector<std::string>& side_palette() {
  static const std::vector<std::string> palette{"#E01B1B", "#F7F307", "#07F70B"};
  return palette;
}

struct CsvScene {
  std::string suffix;  // "", "_A" or "_B"
  Scene scene;
};

namespace detail {

inline Scene prism_from(const std::vector<PrismSample>& samples, double prism_length) {
  double t_min = samples.front().timestamp;
  double t_max = t_min;
  for (const auto& s : samples) {
    t_min = std::min(t_min, s.timestamp);
    t_max = std::max(t_max, s.timestamp);
  }
  return build_prism_scene(samples, TimeAxis(t_min, t_max, prism_length), simplex_frame(2, kCsvSimplexEdge));
}

}  // namespace detail

/// One prism scene for three coefficients; the {3,2,1} / {2,1,0} split for four.
inline std::vector<CsvScene> scenes_from_samples(const std::vector<SampleRow>& rows, double prism_length) {
  if (rows.empty()) throw CsvError("no samples");
  std::set<std::string> ids;
  for (const auto& r : rows) ids.insert(r.object_id);
  if (ids.size() > 1) throw CsvError("expected one object_id per file, found " + std::to_string(ids.size()));
  const std::size_t arity = rows.front().coefficients.size();
  for (const auto& r : rows) {
    if (r.coefficients.size() != arity) throw CsvError("rows differ in coefficient count");
  }

  std::vector<SampleRow> ordered(rows);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SampleRow& a, const SampleRow& b) { return a.timestamp < b.timestamp; });

  std::vector<CsvScene> out;
  if (arity == 3) {
    std::vector<PrismSample> samples;
    for (const auto& r : ordered) {
      const auto& a = r.coefficients;
      const auto side = static_cast<std::size_t>(std::max_element(a.begin(), a.end()) - a.begin());
      samples.push_back({r.timestamp, CoefficientVector(a), Style{side_palette()[side], 1.0, {}}});
    }
    out.push_back({"", detail::prism_from(samples, prism_length)});
    return out;
  }

  auto stage_of = [](const SampleRow& r) { return r.stage.value_or(dominant_stage(CoefficientVector(r.coefficients))); };
  SeriesPartition<SampleRow> parts;
  try {
    parts = partition_four_pattern_series(std::span<const SampleRow>(ordered), stage_of);
  } catch (const SceneError& e) {
    throw CsvError(e.what());
  }

  // Sides of each prism, most severe stage first.
  const std::array<std::pair<const std::vector<SampleRow>*, std::array<int, 3>>, 2> prisms{
      {{&parts.first, {3, 2, 1}}, {&parts.second, {2, 1, 0}}}};
  const std::array<const char*, 2> suffixes{"_A", "_B"};
  for (std::size_t p = 0; p < prisms.size(); ++p) {
    const auto& [series, stages] = prisms[p];
    if (series->empty()) continue;
    std::vector<PrismSample> samples;
    for (const auto& r : *series) {
      std::vector<double> triple;
      for (int st : stages) triple.push_back(r.coefficients[static_cast<std::size_t>(st)]);
      CoefficientVector a;
      try {
        a = CoefficientVector(std::move(triple));
      } catch (const GeometryError& e) {
        throw CsvError("sample at t=" + std::to_string(r.timestamp) + " has no weight on stages " +
                       std::to_string(stages[0]) + std::to_string(stages[1]) + std::to_string(stages[2]) + ": " +
                       e.what());
      }
      samples.push_back({r.timestamp, std::move(a), Style{stage_palette()[static_cast<std::size_t>(stage_of(r))], 1.0, {}}});
    }
    Scene scene = detail::prism_from(samples, prism_length);
    std::vector<std::string> labels;
    for (int st : stages) labels.push_back(std::to_string(st));
    scene.items.emplace_back(SideLabels{labels, Style{}});
    out.push_back({suffixes[p], std::move(scene)});
  }
  return out;
}

}  // namespace simplexviz
