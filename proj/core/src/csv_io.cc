// Copyright 2026 The hrdiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hrdiff/csv_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace hrdiff {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Where(const std::string& source, std::size_t row) {
  return source + ":" + std::to_string(row);
}

double ParseDouble(std::string_view s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw DataError("not a number: '" + std::string(s) + "'", where);
  }
  return v;
}

// Skips leading '#' comment lines; returns the header's row number.
std::size_t ExpectHeader(std::istream& in, std::string_view expected,
                         const std::string& source) {
  std::string line;
  std::size_t row = 0;
  do {
    ++row;
    if (!std::getline(in, line)) {
      throw DataError("missing header row", Where(source, row));
    }
    if (row == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
  } while (!line.empty() && line.front() == '#');
  const auto got = SplitCsvLine(line);
  const auto want = SplitCsvLine(expected);
  if (got != want) {
    throw DataError("unexpected header, expected '" + std::string(expected) + "'",
                    Where(source, row));
  }
  return row;
}

}  // namespace

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    const auto field = line.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    fields.emplace_back(Trim(field));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

void ReadSeriesCsv(std::istream& in, const std::string& source,
                   std::vector<HrSample>& hr,
                   std::vector<IntensitySample>& intensity) {
  std::size_t row = ExpectHeader(in, kSeriesHeader, source);
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsvLine(line);
    const std::string where = Where(source, row);
    if (fields.size() != 6) {
      throw DataError("expected 6 columns, got " + std::to_string(fields.size()),
                      where);
    }
    const Timestamp t = [&] {
      try {
        return ParseIso8601(fields[0]);
      } catch (const DataError& e) {
        throw DataError(e.what(), where);
      }
    }();
    if (!fields[1].empty()) {
      const double bpm = ParseDouble(fields[1], where);
      if (bpm <= 0.0) throw DataError("heart rate must be positive", where);
      hr.push_back({t, bpm});
    }
    const bool any = std::any_of(fields.begin() + 2, fields.end(),
                                 [](const auto& f) { return !f.empty(); });
    if (any) {
      IntensitySample s{t, {}};
      for (std::size_t c = 0; c < kNumIntensityCategories; ++c) {
        if (fields[2 + c].empty()) {
          throw DataError("partial intensity row", where);
        }
        s.levels[c] = ParseDouble(fields[2 + c], where);
      }
      intensity.push_back(s);
    }
  }
}

std::vector<ActivitySegment> ReadSegmentsCsv(std::istream& in,
                                             const std::string& source) {
  std::size_t row = ExpectHeader(in, kSegmentsHeader, source);
  std::vector<ActivitySegment> out;
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsvLine(line);
    const std::string where = Where(source, row);
    if (fields.size() != 3) {
      throw DataError("expected 3 columns, got " + std::to_string(fields.size()),
                      where);
    }
    ActivitySegment seg;
    try {
      seg.label = ParseActivity(fields[0]);
      seg.start = ParseIso8601(fields[1]);
    } catch (const std::exception& e) {
      throw DataError(e.what(), where);
    }
    if (seg.label == ActivityLabel::kNone) {
      throw DataError("segment label must be an activity", where);
    }
    std::int64_t duration = 0;
    auto [ptr, ec] = std::from_chars(
        fields[2].data(), fields[2].data() + fields[2].size(), duration);
    if (ec != std::errc() || ptr != fields[2].data() + fields[2].size()) {
      throw DataError("duration must be an integer number of minutes", where);
    }
    if (duration <= 0) throw DataError("duration must be positive", where);
    seg.duration = duration;
    out.push_back(seg);
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void WriteSeriesCsv(std::ostream& out, std::span<const HrSample> hr,
                    std::span<const IntensitySample> intensity) {
  out << kSeriesHeader << '\n';
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < hr.size() || j < intensity.size()) {
    const bool take_hr = i < hr.size();
    const bool take_int = j < intensity.size();
    Timestamp t;
    if (take_hr && take_int) {
      t = std::min(hr[i].t, intensity[j].t);
    } else {
      t = take_hr ? hr[i].t : intensity[j].t;
    }
    out << FormatIso8601(t) << ',';
    if (take_hr && hr[i].t == t) out << FormatDouble(hr[i++].bpm);
    if (take_int && intensity[j].t == t) {
      for (double v : intensity[j].levels) out << ',' << FormatDouble(v);
      ++j;
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

void WriteSeriesCsv(std::ostream& out, std::span<const AnnotatedSample> samples) {
  out << kSeriesHeader << '\n';
  for (const auto& s : samples) {
    out << FormatIso8601(s.t) << ',' << FormatDouble(s.hr);
    for (double v : s.intensity) out << ',' << FormatDouble(v);
    out << '\n';
  }
}

void WriteSegmentsCsv(std::ostream& out,
                      std::span<const ActivitySegment> segments) {
  out << kSegmentsHeader << '\n';
  for (const auto& s : segments) {
    out << ActivityName(s.label) << ',' << FormatIso8601(s.start) << ','
        << s.duration << '\n';
  }
}

std::vector<PatientData> ReadPatientDirectory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw DataError("not a directory", dir.string());
  }
  constexpr std::string_view kSuffix = "_series.csv";
  std::map<std::string, fs::path> series_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > kSuffix.size() &&
        name.compare(name.size() - kSuffix.size(), kSuffix.size(), kSuffix) == 0) {
      series_files.emplace(name.substr(0, name.size() - kSuffix.size()),
                           entry.path());
    }
  }
  std::vector<PatientData> patients;
  for (const auto& [id, path] : series_files) {
    PatientData p;
    p.id = id;
    std::ifstream in(path);
    if (!in) throw DataError("cannot open", path.string());
    ReadSeriesCsv(in, path.string(), p.hr, p.intensity);
    const fs::path seg_path = dir / (id + "_segments.csv");
    if (fs::exists(seg_path)) {
      std::ifstream seg_in(seg_path);
      if (!seg_in) throw DataError("cannot open", seg_path.string());
      p.segments = ReadSegmentsCsv(seg_in, seg_path.string());
    }
    patients.push_back(std::move(p));
  }
  return patients;
}

void WritePatient(const std::filesystem::path& dir, const PatientData& patient,
                  std::string_view preamble) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (patient.id + "_series.csv"));
    if (!out) throw DataError("cannot write", (dir / patient.id).string());
    out << preamble;
    WriteSeriesCsv(out, patient.hr, patient.intensity);
  }
  std::ofstream out(dir / (patient.id + "_segments.csv"));
  if (!out) throw DataError("cannot write", (dir / patient.id).string());
  out << preamble;
  WriteSegmentsCsv(out, patient.segments);
}

}  // namespace hrdiff
