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

// CSV readers and writers for the on-disk schemas.
//
// Minute series (header mandatory):
//   timestamp_iso8601,hr_bpm,sedentary,lightly_active,fairly_active,very_active
// An empty hr_bpm cell means "no HR at this minute"; empty intensity cells mean
// "no intensity at this minute". Timestamps are UTC.
//
// Activity segments (header mandatory):
//   label,start_iso8601,duration_min
//
// Readers skip '#' comment lines before the header.

#ifndef HRDIFF_CSV_IO_H_
#define HRDIFF_CSV_IO_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hrdiff/series.h"

namespace hrdiff {

struct PatientData {
  std::string id;
  std::vector<HrSample> hr;
  std::vector<IntensitySample> intensity;
  std::vector<ActivitySegment> segments;
};

inline constexpr std::string_view kSeriesHeader =
    "timestamp_iso8601,hr_bpm,sedentary,lightly_active,fairly_active,very_active";
inline constexpr std::string_view kSegmentsHeader =
    "label,start_iso8601,duration_min";

// Splits one CSV line on commas and trims surrounding blanks. Quoting is not
// supported; none of the schemas need it.
std::vector<std::string> SplitCsvLine(std::string_view line);

// `source` is used in diagnostics ("file:row").
void ReadSeriesCsv(std::istream& in, const std::string& source,
                   std::vector<HrSample>& hr,
                   std::vector<IntensitySample>& intensity);
std::vector<ActivitySegment> ReadSegmentsCsv(std::istream& in,
                                             const std::string& source);

void WriteSeriesCsv(std::ostream& out, std::span<const HrSample> hr,
                    std::span<const IntensitySample> intensity);
void WriteSeriesCsv(std::ostream& out, std::span<const AnnotatedSample> samples);
void WriteSegmentsCsv(std::ostream& out,
                      std::span<const ActivitySegment> segments);

// Directory layout shared by `generate`, `preprocess` and `train`:
//   <dir>/<id>_series.csv and <dir>/<id>_segments.csv
std::vector<PatientData> ReadPatientDirectory(const std::filesystem::path& dir);
// `preamble` is written verbatim before each header; it must consist of
// '#' comment lines.
void WritePatient(const std::filesystem::path& dir, const PatientData& patient,
                  std::string_view preamble = {});

// Formats a double with the shortest representation that round-trips.
std::string FormatDouble(double v);

}  // namespace hrdiff

#endif  // HRDIFF_CSV_IO_H_
