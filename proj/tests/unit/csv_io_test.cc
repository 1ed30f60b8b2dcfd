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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace hrdiff {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hrdiff_csv_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(CsvTest, SplitTrims) {
  EXPECT_EQ(SplitCsvLine(" a, b ,,c\r"), (std::vector<std::string>{"a", "b", "", "c"}));
}

TEST(CsvTest, SeriesWithGapsAndMissingCells) {
  std::istringstream in(
      "timestamp_iso8601,hr_bpm,sedentary,lightly_active,fairly_active,very_active\n"
      "2024-01-01T00:00Z,70,1,0,0,0\n"
      "2024-01-01T00:01Z,,0,1,0,0\n"
      "\n"
      "2024-01-01T00:02Z,72.5,,,,\n");
  std::vector<HrSample> hr;
  std::vector<IntensitySample> intensity;
  ReadSeriesCsv(in, "mem", hr, intensity);
  ASSERT_EQ(hr.size(), 2u);
  EXPECT_EQ(hr[1].bpm, 72.5);
  ASSERT_EQ(intensity.size(), 2u);
  EXPECT_EQ(intensity[1].levels[1], 1.0);
}

TEST(CsvTest, ErrorsNameSourceAndRow) {
  auto expect_row = [](const std::string& text, const std::string& where) {
    std::istringstream in(text);
    std::vector<HrSample> hr;
    std::vector<IntensitySample> intensity;
    try {
      ReadSeriesCsv(in, "f.csv", hr, intensity);
      FAIL() << "expected DataError";
    } catch (const DataError& e) {
      EXPECT_EQ(e.where(), where) << e.what();
    }
  };
  const std::string header =
      "timestamp_iso8601,hr_bpm,sedentary,lightly_active,fairly_active,very_active\n";
  expect_row(header + "2024-01-01T00:00Z,abc,1,0,0,0\n", "f.csv:2");
  expect_row(header + "2024-01-01T00:00Z,70,1,0,0\n", "f.csv:2");
  expect_row(header + "2024-01-01T00:00Z,70,1,0,0,0\n2024-01-01T00:01Z,-3,1,0,0,0\n", "f.csv:3");
  expect_row(header + "2024-01-01T00:00Z,70,1,,0,0\n", "f.csv:2");
  expect_row("# note\nwrong,header\n", "f.csv:2");
}

TEST(CsvTest, SegmentsParseAndValidate) {
  std::istringstream ok("label,start_iso8601,duration_min\nrunning,2024-01-01T10:00Z,30\n");
  const auto segs = ReadSegmentsCsv(ok, "s");
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].label, ActivityLabel::kRunning);
  EXPECT_EQ(segs[0].duration, 30);
  std::istringstream bad_label("label,start_iso8601,duration_min\nyoga,2024-01-01T10:00Z,30\n");
  EXPECT_THROW(ReadSegmentsCsv(bad_label, "s"), DataError);
  std::istringstream none("label,start_iso8601,duration_min\nnone,2024-01-01T10:00Z,30\n");
  EXPECT_THROW(ReadSegmentsCsv(none, "s"), DataError);
  std::istringstream zero("label,start_iso8601,duration_min\nsport,2024-01-01T10:00Z,0\n");
  EXPECT_THROW(ReadSegmentsCsv(zero, "s"), DataError);
  std::istringstream frac("label,start_iso8601,duration_min\nsport,2024-01-01T10:00Z,2.5\n");
  EXPECT_THROW(ReadSegmentsCsv(frac, "s"), DataError);
}

TEST(CsvTest, PatientDirectoryRoundTripWithPreamble) {
  const auto dir = TempDir("roundtrip");
  PatientData p;
  p.id = "p7";
  const Timestamp t0 = ParseIso8601("2024-05-01T06:00Z");
  for (int m = 0; m < 5; ++m) {
    p.hr.push_back({t0 + m, 60.0 + m / 3.0});
    if (m != 2) p.intensity.push_back({t0 + m, {0.25, 0.5, 0.0, 1.0 / 7.0}});
  }
  p.segments.push_back({ActivityLabel::kAerobicWorkout, t0 + 1, 3});
  WritePatient(dir, p, "# provenance line\n");
  const auto back = ReadPatientDirectory(dir);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].id, "p7");
  ASSERT_EQ(back[0].hr.size(), 5u);
  for (int m = 0; m < 5; ++m) EXPECT_EQ(back[0].hr[m].bpm, p.hr[m].bpm);
  ASSERT_EQ(back[0].intensity.size(), 4u);
  EXPECT_EQ(back[0].intensity[3].levels, p.intensity[3].levels);
  ASSERT_EQ(back[0].segments.size(), 1u);
  EXPECT_EQ(back[0].segments[0].start, t0 + 1);
  std::ifstream raw(dir / "p7_series.csv");
  std::string first;
  std::getline(raw, first);
  EXPECT_EQ(first, "# provenance line");
}

TEST(CsvTest, MissingDirectoryIsADataError) {
  EXPECT_THROW(ReadPatientDirectory("/nonexistent/hrdiff"), DataError);
}

TEST(CsvTest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 72.5, 1e-17, 123456.789}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
}

}  // namespace
}  // namespace hrdiff
