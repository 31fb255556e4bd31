#include "bfdc/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "bfdc/errors.hpp"

namespace bfdc {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_num(const std::string& s, const std::filesystem::path& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str())
    throw ConfigError("malformed number in '" + path.string() + "'");
  return v;
}

void expect_header(std::ifstream& in, const std::string& expected,
                   const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line) || line != expected)
    throw ConfigError("unexpected header in '" + path.string() + "'");
}

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

void write_interfaces_csv(const InterfaceTrack& track,
                          const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "t,left_pos,right_pos,sub_measure,super_measure,degen_measure\n";
  for (std::size_t i = 0; i < track.times.size(); ++i)
    out << format_double(track.times[i]) << ','
        << opt_field(track.left_pos[i]) << ','
        << opt_field(track.right_pos[i]) << ','
        << format_double(track.sub_measure[i]) << ','
        << format_double(track.super_measure[i]) << ','
        << format_double(track.degen_measure[i]) << '\n';
  if (!out.good()) throw ConfigError("write failed for '" + path.string() + "'");
}

InterfaceTrack read_interfaces_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  expect_header(in, "t,left_pos,right_pos,sub_measure,super_measure,degen_measure",
                path);
  InterfaceTrack track;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6)
      throw ConfigError("bad column count in '" + path.string() + "'");
    track.times.push_back(parse_num(f[0], path));
    track.left_pos.push_back(
        f[1].empty() ? std::nullopt
                     : std::optional<double>(parse_num(f[1], path)));
    track.right_pos.push_back(
        f[2].empty() ? std::nullopt
                     : std::optional<double>(parse_num(f[2], path)));
    track.sub_measure.push_back(parse_num(f[3], path));
    track.super_measure.push_back(parse_num(f[4], path));
    track.degen_measure.push_back(parse_num(f[5], path));
    track.collapsed.push_back(!track.left_pos.back() &&
                              !track.right_pos.back());
  }
  return track;
}

void write_states_csv(const Trajectory& traj, const FluxSpec& flux,
                      double delta, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "t,x,u,ux,label\n";
  for (const SimState& s : traj.samples) {
    const std::vector<double> ux = gradient(s, traj.grid);
    const RegionLabels labels = classify(ux, flux, delta);
    for (int i = 0; i < traj.grid.n; ++i) {
      const char* name = labels.labels[i] == Label::sub       ? "sub"
                         : labels.labels[i] == Label::super   ? "super"
                                                              : "degenerate";
      out << format_double(s.t) << ',' << format_double(traj.grid.x(i))
          << ',' << format_double(s.u[i]) << ',' << format_double(ux[i])
          << ',' << name << '\n';
    }
  }
  if (!out.good()) throw ConfigError("write failed for '" + path.string() + "'");
}

void write_fronts_csv(const FrontTrack& track,
                      const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "t,left_front,right_front\n";
  for (std::size_t i = 0; i < track.times.size(); ++i)
    out << format_double(track.times[i]) << ','
        << opt_field(track.left_front[i]) << ','
        << opt_field(track.right_front[i]) << '\n';
  if (!out.good()) throw ConfigError("write failed for '" + path.string() + "'");
}

FrontTrack read_fronts_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  expect_header(in, "t,left_front,right_front", path);
  FrontTrack track;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 3)
      throw ConfigError("bad column count in '" + path.string() + "'");
    track.times.push_back(parse_num(f[0], path));
    track.left_front.push_back(
        f[1].empty() ? std::nullopt
                     : std::optional<double>(parse_num(f[1], path)));
    track.right_front.push_back(
        f[2].empty() ? std::nullopt
                     : std::optional<double>(parse_num(f[2], path)));
  }
  return track;
}

}  // namespace bfdc
