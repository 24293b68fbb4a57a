#pragma once

#include <string>
#include <vector>

#include "srsp/evolution.hpp"
#include "srsp/solver.hpp"

namespace srsp {

struct StabilityReport;

// Shortest decimal string that parses back to exactly the same double.
std::string format_shortest(double v);
// Fixed 17 significant digits; enough to reproduce any double exactly.
std::string format_sig17(double v);

// CSV renderers for the run artifacts.  Numeric cells use the shortest
// round-trip representation except the profile table, which pins 17
// significant digits.  Rows end with '\n'; no trailing blank line beyond the
// final newline.
std::string convergence_csv(const std::vector<ScfIterationRecord>& history);
std::string trajectory_csv(const TrajectoryRecord& record);
std::string stability_csv(const StabilityReport& report);
// One row per grid point: the point's coordinates, the stationary potential,
// and the density.  Header is x,V0,n0 in one dimension and x1,..,xd,V0,n0
// otherwise.
std::string profiles_csv(const DomainSpec& domain, const ModeField& v0, const ModeField& n0);

}  // namespace srsp
