#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "micromaser/detection.hpp"
#include "micromaser/experiments.hpp"
#include "micromaser/oracle.hpp"
#include "micromaser/trajectory.hpp"

namespace micromaser::csv {

// Every file starts with "# schema_version=<N>,table=<name>" followed by the
// column header row. Readers must reject other versions.
inline constexpr int kSchemaVersion = 1;

// Shortest round-trip decimal form; identical across platforms.
std::string format_double(double value);

void write_events(std::ostream& out, std::span<const EventRecord> events);
void write_clicks(std::ostream& out, std::span<const ClickRecord> clicks);
void write_detections(std::ostream& out, std::span<const DetectionEvent> detections);
void write_rate_series(std::ostream& out, std::span<const RatePoint> series, double injection_time);
void write_efficiency(std::ostream& out, std::span<const EfficiencyPoint> points);
void write_hysteresis(std::ostream& out, std::span<const HysteresisPoint> points);
void write_distribution(std::ostream& out, std::span<const double> oracle, std::span<const double> sampled);
void write_injections(std::ostream& out, std::span<const double> times, std::span<const int> detections);

std::vector<EventRecord> read_events(std::istream& in);

// Writes `text` to `path`, creating parent directories. Throws with the path on failure.
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace micromaser::csv
