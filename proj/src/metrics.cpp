#include "tlc/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tlc/error.hpp"
#include "tlc/messaging.hpp"

namespace tlc {

double utilization(std::span<const GreenInterval> green_log, std::span<const DepartureRecord> departure_log,
                   double saturation_headway_s) {
  double slots = 0.0;
  for (const auto& g : green_log) slots += (g.end_s - g.start_s) / saturation_headway_s;
  if (!(slots > 0.0)) return 0.0;
  long productive = 0;
  for (const auto& d : departure_log) {
    const bool on_green = std::any_of(green_log.begin(), green_log.end(), [&](const GreenInterval& g) {
      return g.node == d.node && d.time_s >= g.start_s && d.time_s < g.end_s;
    });
    if (on_green) ++productive;
  }
  return std::clamp(static_cast<double>(productive) / slots, 0.0, 1.0);
}

MetricsFrame capture_frame(const World& world) {
  MetricsFrame f;
  f.time_s = world.now();
  double green_total = 0.0;
  for (NodeId node : kAllNodes) {
    const auto& lane = world.lane(node);
    f.queue[index_of(node)] = static_cast<int>(lane.queue.size());
    f.green_s[index_of(node)] = world.green_seconds()[index_of(node)];
    green_total += f.green_s[index_of(node)];
  }
  f.arrivals = world.total_arrivals();
  f.departures = world.total_departures();
  const double slots = green_total / world.config().saturation_headway_s;
  f.utilization = slots > 0.0 ? std::clamp(static_cast<double>(f.departures) / slots, 0.0, 1.0) : 0.0;
  f.mean_queue = std::accumulate(f.queue.begin(), f.queue.end(), 0.0) / static_cast<double>(kNodeCount);
  return f;
}

double population_stddev(std::span<const int> values) {
  if (values.empty()) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (int v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

int spread(std::span<const int> values) {
  if (values.empty()) return 0;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

std::string frames_csv_header() {
  std::string h = "time";
  for (NodeId n : kAllNodes) h += std::string(",queue_") + to_letter(n);
  for (NodeId n : kAllNodes) h += std::string(",green_") + to_letter(n);
  h += ",arrivals,departures,utilization,mean_queue";
  return h;
}

std::string to_csv_row(const MetricsFrame& f) {
  std::string row = format_number(f.time_s);
  for (int q : f.queue) row += "," + std::to_string(q);
  for (double g : f.green_s) row += "," + format_number(g);
  row += "," + std::to_string(f.arrivals) + "," + std::to_string(f.departures);
  row += "," + format_number(f.utilization) + "," + format_number(f.mean_queue);
  return row;
}

void write_frames_csv(std::ostream& out, std::span<const MetricsFrame> frames) {
  out << frames_csv_header() << '\n';
  for (const auto& f : frames) out << to_csv_row(f) << '\n';
}

std::string frames_to_csv(std::span<const MetricsFrame> frames) {
  std::ostringstream out;
  write_frames_csv(out, frames);
  return out.str();
}

namespace {

template <typename T>
T parse_cell(std::string_view cell, std::size_t line_no) {
  T value{};
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw ConfigError("bad value '" + std::string(cell) + "'", "frames.csv:" + std::to_string(line_no));
  }
  return value;
}

}  // namespace

std::vector<MetricsFrame> parse_frames_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != frames_csv_header()) {
    throw ConfigError("missing or unexpected header", "frames.csv:1");
  }
  constexpr std::size_t kColumns = 1 + 2 * kNodeCount + 4;
  std::vector<MetricsFrame> frames;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    while (true) {
      auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != kColumns) {
      throw ConfigError("expected " + std::to_string(kColumns) + " columns", "frames.csv:" + std::to_string(line_no));
    }
    MetricsFrame f;
    std::size_t c = 0;
    f.time_s = parse_cell<double>(cells[c++], line_no);
    for (auto& q : f.queue) q = parse_cell<int>(cells[c++], line_no);
    for (auto& g : f.green_s) g = parse_cell<double>(cells[c++], line_no);
    f.arrivals = parse_cell<long>(cells[c++], line_no);
    f.departures = parse_cell<long>(cells[c++], line_no);
    f.utilization = parse_cell<double>(cells[c++], line_no);
    f.mean_queue = parse_cell<double>(cells[c++], line_no);
    frames.push_back(f);
  }
  return frames;
}

}  // namespace tlc
