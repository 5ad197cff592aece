#include "delaydyn/csv.hpp"

#include <cstdio>
#include <fstream>

#include "delaydyn/errors.hpp"

namespace delaydyn {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // keep '\n' on every platform
  if (!out) throw ValidationError("cannot open output file: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw ValidationError("failed writing output file: " + path);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_timeseries_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,x,y\n";
  for (std::size_t i = 0; i < traj.n_nodes(); ++i) {
    out << format_double(traj.time_at(i)) << ','
        << format_double(traj.states[i].x) << ','
        << format_double(traj.states[i].y) << '\n';
  }
  finish(out, path);
}

void write_ensemble_mean_csv(const std::string& path, const Trajectory& mean) {
  auto out = open_out(path);
  out << "t,mean_x,mean_y\n";
  for (std::size_t i = 0; i < mean.n_nodes(); ++i) {
    out << format_double(mean.time_at(i)) << ','
        << format_double(mean.states[i].x) << ','
        << format_double(mean.states[i].y) << '\n';
  }
  finish(out, path);
}

void write_bifurcation_csv(const std::string& path,
                           const BifurcationDiagram& diagram) {
  auto out = open_out(path);
  out << "tau,x_min,x_max,y_min,y_max\n";
  for (const auto& row : diagram.rows) {
    out << format_double(row.tau) << ',' << format_double(row.x_min) << ','
        << format_double(row.x_max) << ',' << format_double(row.y_min) << ','
        << format_double(row.y_max) << '\n';
  }
  finish(out, path);
}

void write_crossover_csv(const std::string& path,
                         const CrossoverResult& result) {
  auto out = open_out(path);
  out << "tau,mean_x,mean_y\n";
  for (const auto& row : result.rows) {
    out << format_double(row.tau) << ',' << format_double(row.mean_x) << ','
        << format_double(row.mean_y) << '\n';
  }
  finish(out, path);
}

void write_extinction_csv(const std::string& path,
                          const ExtinctionCurve& curve) {
  auto out = open_out(path);
  out << "tau,mean_ext_time,std_ext_time,fraction_extinct\n";
  for (const auto& row : curve.rows) {
    out << format_double(row.tau) << ',' << format_double(row.mean_ext_time)
        << ',' << format_double(row.std_ext_time) << ','
        << format_double(row.fraction_extinct) << '\n';
  }
  finish(out, path);
}

}  // namespace delaydyn
