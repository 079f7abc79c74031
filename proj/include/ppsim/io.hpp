#pragma once

#include "ppsim/gof.hpp"
#include "ppsim/graph.hpp"
#include "ppsim/hawkes.hpp"
#include "ppsim/simulate.hpp"

#include <iosfwd>
#include <string>

namespace ppsim {

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double x);

/// Network text format: header `M <count>`, then `nu <i> <value>` lines,
/// then per kernel a `kernel <j> <i>` line followed by `<t> <delta>`
/// breakpoint lines and a blank line. Node indices are 1-based in the file.
/// Writing then reading then writing again is byte-identical.
void write_network(std::ostream& out, const HawkesNetwork& net);
HawkesNetwork read_network(std::istream& in);

/// Graph text format: `M <count>` header then `j i` edge lines (1-based);
/// `#` starts a comment.
void write_graph(std::ostream& out, int node_count, const EdgeList& edges);
std::pair<int, EdgeList> read_graph(std::istream& in);

/// points.csv: header `time,node`, rows ascending in time, 1-based nodes,
/// full round-trip precision.
void write_points_csv(std::ostream& out, const SimulationResult& result);
SimulationResult read_points_csv(std::istream& in);

/// report.csv rows `test,node,p_value` (node 1-based).
void write_report_csv(std::ostream& out, const TestReport& report, int node);

} // namespace ppsim
