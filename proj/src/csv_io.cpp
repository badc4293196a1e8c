#include "micromaser/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace micromaser::csv {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

namespace {

void header(std::ostream& out, std::string_view table, std::string_view columns) {
  out << "# schema_version=" << kSchemaVersion << ",table=" << table << '\n' << columns << '\n';
}

}  // namespace

void write_events(std::ostream& out, std::span<const EventRecord> events) {
  header(out, "events", "t,kind,n_after,phi_used");
  for (const auto& e : events) {
    out << format_double(e.t) << ',' << to_string(e.kind) << ',' << e.n_after << ',';
    if (e.phi_used) out << format_double(*e.phi_used);
    out << '\n';
  }
}

void write_clicks(std::ostream& out, std::span<const ClickRecord> clicks) {
  header(out, "clicks", "t,channel,origin");
  for (const auto& c : clicks)
    out << format_double(c.t) << ',' << to_string(c.channel) << ',' << to_string(c.origin) << '\n';
}

void write_detections(std::ostream& out, std::span<const DetectionEvent> detections) {
  header(out, "detections", "t_trigger,t_rearmed,window_count");
  for (const auto& d : detections)
    out << format_double(d.t_trigger) << ',' << format_double(d.t_rearmed) << ',' << d.window_count << '\n';
}

void write_rate_series(std::ostream& out, std::span<const RatePoint> series, double injection_time) {
  header(out, "rate_series", "t,n,ground_rate,injection_time");
  for (const auto& p : series)
    out << format_double(p.t) << ',' << p.n << ',' << format_double(p.ground_rate) << ','
        << format_double(injection_time) << '\n';
}

void write_efficiency(std::ostream& out, std::span<const EfficiencyPoint> points) {
  header(out, "efficiency",
         "R,two_atom_mode,injected,detected,efficiency,ci_low,ci_high,mean_latency,false_triggers,error");
  for (const auto& p : points) {
    out << format_double(p.R) << ',' << to_string(p.two_atom_mode) << ',' << p.injected << ',' << p.detected << ','
        << format_double(p.efficiency) << ',' << format_double(p.ci_low) << ',' << format_double(p.ci_high) << ','
        << format_double(p.mean_latency) << ',' << p.false_triggers << ',';
    if (p.error) {
      std::string cleaned = *p.error;
      for (char& ch : cleaned)
        if (ch == ',' || ch == '\n') ch = ';';
      out << cleaned;
    }
    out << '\n';
  }
}

void write_hysteresis(std::ostream& out, std::span<const HysteresisPoint> points) {
  header(out, "hysteresis", "R,branch,rate,vacuum_probability,mean_photons");
  for (const auto& p : points)
    out << format_double(p.R) << ',' << to_string(p.branch) << ',' << format_double(p.ground_atom_rate) << ','
        << format_double(p.vacuum_probability) << ',' << format_double(p.mean_photons) << '\n';
}

void write_distribution(std::ostream& out, std::span<const double> oracle, std::span<const double> sampled) {
  header(out, "distribution", "n,probability,sampled");
  for (std::size_t n = 0; n < oracle.size(); ++n) {
    out << n << ',' << format_double(oracle[n]) << ',';
    if (n < sampled.size()) out << format_double(sampled[n]);
    out << '\n';
  }
}

void write_injections(std::ostream& out, std::span<const double> times, std::span<const int> detections) {
  header(out, "injections", "t,detections");
  for (std::size_t i = 0; i < times.size(); ++i)
    out << format_double(times[i]) << ',' << (i < detections.size() ? detections[i] : 0) << '\n';
}

std::vector<EventRecord> read_events(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# schema_version=", 0) != 0)
    throw std::runtime_error("events csv: missing schema line");
  const std::string expected = "# schema_version=" + std::to_string(kSchemaVersion) + ",table=events";
  if (line != expected) throw std::runtime_error("events csv: unsupported schema '" + line + "'");
  if (!std::getline(in, line) || line != "t,kind,n_after,phi_used")
    throw std::runtime_error("events csv: unexpected header");

  std::vector<EventRecord> events;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string t, kind, n, phi;
    std::getline(row, t, ',');
    std::getline(row, kind, ',');
    std::getline(row, n, ',');
    std::getline(row, phi, ',');
    EventRecord e;
    std::from_chars(t.data(), t.data() + t.size(), e.t);
    e.kind = jump_kind_from_string(kind);
    std::from_chars(n.data(), n.data() + n.size(), e.n_after);
    if (!phi.empty()) {
      double value = 0.0;
      std::from_chars(phi.data(), phi.data() + phi.size(), value);
      e.phi_used = value;
    }
    if (e.kind == JumpKind::AtomGround) e.ground_atoms = 1;
    events.push_back(e);
  }
  return events;
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace micromaser::csv
