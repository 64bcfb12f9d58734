#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <string>
#include <vector>

#include "splinet/periodic.hpp"
#include "splinet/projection.hpp"

namespace splinet {

/// One hourly observation. Directions are degrees in (0, 360], speeds m/s.
struct WindRecord {
  int year = 0;
  int month = 0;
  int day = 0;
  int hour = 0;
  double wd10 = 0.0;
  double ws10 = 0.0;
  double wd50 = 0.0;
  double ws50 = 0.0;
};

/// POWER-style CSV: a header naming YEAR, MO, DY, HR, WD10M, WS10M, WD50M,
/// WS50M (any order, extra columns ignored); lines starting with '#' and a
/// "-BEGIN HEADER-" … "-END HEADER-" preamble are skipped. Throws ParseError
/// with the line number on malformed rows and on non-increasing timestamps.
std::vector<WindRecord> read_wind_csv(std::istream& in);
std::vector<WindRecord> ingest_csv(const std::filesystem::path& path);

struct WindConfig {
  int density_order = 3;
  std::size_t density_dimension = 12;
  int speed_order = 4;
  int speed_levels = 3;
  std::size_t bins = 12;
  double pad_step = 1.0 / 256.0;
  double pad_gap = 1.0 / 64.0;
};

/// Periodic splinets on (0, 1] used by the pipeline.
struct WindBases {
  PeriodicBasis density_basis;
  NetPtr density;
  PeriodicBasis speed_basis;
  NetPtr speed;
};

WindBases make_wind_bases(const WindConfig& config);

struct DailyFunctions {
  std::size_t day = 0; // 1-based
  int year = 0;
  int month = 0;
  int date = 0;
  Histogram hist10;
  Histogram hist50;
  DiscreteCurve scatter10; // (θ/360, speed), unpadded
  DiscreteCurve scatter50;
  ProjectionResult density10;
  ProjectionResult speed10;
  ProjectionResult density50;
  ProjectionResult speed50;
};

/// Groups records by calendar day and fits the four daily functions.
std::vector<DailyFunctions> daily_pipeline(const std::vector<WindRecord>& records,
                                           const WindBases& bases, const WindConfig& config);

/// Writes day_<i>/{density10,speed10,density50,speed50}.csv, means/*.json and
/// the four figures fig_raw.svg, fig_density.svg, fig_speed.svg, fig_days.svg.
void write_wind_outputs(const std::filesystem::path& outdir, const std::vector<DailyFunctions>& days,
                        const WindBases& bases);

/// Hourly synthetic data: wrapped-normal mixture directions with slowly
/// drifting modes and direction-dependent speeds, starting 2023-01-01.
std::string synthesize_wind_csv(std::size_t days, std::uint64_t seed);

} // namespace splinet
