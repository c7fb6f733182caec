#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nornet/experiment.hpp"
#include "nornet/network.hpp"
#include "nornet/reduction.hpp"

namespace nornet {

// NetworkFileV1:
//   nornet 1 <name>
//   node <id> <disease|ips|finding> leak=<float> [prior=<float>] [phase=<int>]
//   edge <src> <dst> eta=<float>
// '#' starts a comment; blank lines are ignored. Errors are Error(Parse) with
// a "line N: " prefix.
Network parse_network(std::string_view text);

// Syntax-checked only; the result may violate network invariants (see
// validate()). Used by tools that report violations instead of failing.
Network parse_network_unchecked(std::string_view text);

// Canonical form: nodes by id, then edges by (src, dst), floats with 17
// significant digits so that parse(serialize(net)) == net.
std::string serialize_network(const Network& net);

Network read_network_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

// %.<digits>g
std::string format_real(double x, int digits);

// src,dst,eta,path,composed_eta; one row per source path, nodes joined by '>'.
std::string provenance_csv(const ReductionReport& report);

// case_id,node_id,kind,phase,value for every disease and finding.
std::string cases_csv(const Network& net, const std::vector<TestCase>& cases);

// phase,disease_id,n_cases,mean_tp_two_level,mean_tp_three_level,
// mean_fp_two_level,mean_fp_three_level,t_stat,df,sig95,sig975
std::string report_csv(const ExperimentSummary& summary);

}  // namespace nornet
