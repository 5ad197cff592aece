#pragma once

#include <string>

#include "delaydyn/ensemble.hpp"
#include "delaydyn/solver.hpp"

namespace delaydyn {

/// Shortest decimal form that round-trips the double exactly (17 significant
/// digits).
std::string format_double(double v);

// CSV emitters. Fixed schemas, comma separators, '\n' newlines, mandatory
// header row, full-precision values.

/// Header: t,x,y
void write_timeseries_csv(const std::string& path, const Trajectory& traj);

/// Header: t,mean_x,mean_y
void write_ensemble_mean_csv(const std::string& path, const Trajectory& mean);

/// Header: tau,x_min,x_max,y_min,y_max
void write_bifurcation_csv(const std::string& path,
                           const BifurcationDiagram& diagram);

/// Header: tau,mean_x,mean_y
void write_crossover_csv(const std::string& path,
                         const CrossoverResult& result);

/// Header: tau,mean_ext_time,std_ext_time,fraction_extinct
void write_extinction_csv(const std::string& path,
                          const ExtinctionCurve& curve);

}  // namespace delaydyn
