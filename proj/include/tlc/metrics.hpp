#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tlc/intersection.hpp"
#include "tlc/road.hpp"

namespace tlc {

struct MetricsFrame {
  double time_s = 0.0;
  std::array<int, kNodeCount> queue{};
  std::array<double, kNodeCount> green_s{};  // cumulative
  long arrivals = 0;                         // cumulative, initial queues included
  long departures = 0;                       // cumulative
  double utilization = 0.0;                  // productive / granted green slots to date
  double mean_queue = 0.0;

  friend bool operator==(const MetricsFrame&, const MetricsFrame&) = default;
};

// Fraction of granted green headway slots in which a vehicle left on a
// green direction. 0 when no green was granted.
double utilization(std::span<const GreenInterval> green_log, std::span<const DepartureRecord> departure_log,
                   double saturation_headway_s);

MetricsFrame capture_frame(const World& world);

double population_stddev(std::span<const int> values);
int spread(std::span<const int> values);  // max - min

std::string frames_csv_header();
std::string to_csv_row(const MetricsFrame& frame);
void write_frames_csv(std::ostream& out, std::span<const MetricsFrame> frames);
std::string frames_to_csv(std::span<const MetricsFrame> frames);
// Throws ConfigError on malformed input.
std::vector<MetricsFrame> parse_frames_csv(const std::string& text);

}  // namespace tlc
