#include "nornet/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "nornet/error.hpp"

namespace nornet {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& reason) {
  throw Error(ErrorClass::Parse, "line " + std::to_string(line) + ": " + reason);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_real(std::string_view text, std::size_t line, std::string_view key) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x)) {
    fail(line, "malformed float for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return x;
}

int parse_int(std::string_view text, std::size_t line, std::string_view key) {
  int x = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(line, "malformed integer for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return x;
}

// key=value fields after the positional tokens of a directive.
std::map<std::string_view, std::string_view> parse_fields(std::span<const std::string_view> tokens,
                                                          std::size_t line) {
  std::map<std::string_view, std::string_view> fields;
  for (std::string_view tok : tokens) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      fail(line, "expected key=value, got '" + std::string(tok) + "'");
    }
    if (!fields.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second) {
      fail(line, "duplicate field '" + std::string(tok.substr(0, eq)) + "'");
    }
  }
  return fields;
}

void reject_unknown(const std::map<std::string_view, std::string_view>& fields,
                    std::initializer_list<std::string_view> allowed, std::size_t line) {
  for (const auto& [key, value] : fields) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(line, "unknown field '" + std::string(key) + "'");
    }
  }
}

}  // namespace

std::string format_real(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

namespace {

struct ParsedNetwork {
  Network net;
  std::map<std::string, std::size_t> node_line;
  std::map<std::string, std::size_t> edge_line;
};

ParsedNetwork parse_lines(std::string_view text) {
  std::optional<std::string> name;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::map<std::string, std::size_t> node_line;
  std::map<std::string, std::size_t> edge_line;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    const std::string_view directive = tokens[0];
    if (!name) {
      if (directive != "nornet") fail(line_no, "expected header 'nornet 1 <name>'");
      if (tokens.size() < 3) fail(line_no, "header needs a version and a name");
      if (tokens[1] != "1") fail(line_no, "unsupported format version '" + std::string(tokens[1]) + "'");
      const std::size_t start = line.find(tokens[2]);
      std::string_view rest = line.substr(start);
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t' || rest.back() == '\r')) {
        rest.remove_suffix(1);
      }
      name = std::string(rest);
      continue;
    }

    if (directive == "node") {
      if (tokens.size() < 3) fail(line_no, "node needs an id and a kind");
      Node node;
      node.id = std::string(tokens[1]);
      auto kind = parse_node_kind(tokens[2]);
      if (!kind) fail(line_no, "unknown node kind '" + std::string(tokens[2]) + "'");
      node.kind = *kind;
      const auto fields = parse_fields(std::span(tokens).subspan(3), line_no);
      reject_unknown(fields, {"leak", "prior", "phase"}, line_no);
      auto leak = fields.find("leak");
      if (leak == fields.end()) fail(line_no, "missing required field leak");
      node.leak = parse_real(leak->second, line_no, "leak");
      if (!(node.leak >= 0.0 && node.leak <= 1.0)) fail(line_no, "leak out of range");
      if (auto it = fields.find("prior"); it != fields.end()) {
        node.prior = parse_real(it->second, line_no, "prior");
        if (!(*node.prior >= 0.0 && *node.prior <= 1.0)) fail(line_no, "prior out of range");
      }
      if (auto it = fields.find("phase"); it != fields.end()) {
        node.phase = parse_int(it->second, line_no, "phase");
        if (*node.phase < 1 || *node.phase > kPhaseCount) fail(line_no, "phase out of range");
      }
      if (node.kind == NodeKind::Disease && !node.prior) fail(line_no, "missing required field prior");
      if (node.kind != NodeKind::Disease && node.prior) fail(line_no, "prior is only valid on disease nodes");
      if (node.kind == NodeKind::Finding && !node.phase) fail(line_no, "missing required field phase");
      if (node.kind != NodeKind::Finding && node.phase) fail(line_no, "phase is only valid on finding nodes");
      if (!node_line.emplace(node.id, line_no).second) {
        fail(line_no, "duplicate node id '" + node.id + "'");
      }
      nodes.push_back(std::move(node));
    } else if (directive == "edge") {
      if (tokens.size() < 3) fail(line_no, "edge needs a source and a destination");
      Edge edge;
      edge.src = std::string(tokens[1]);
      edge.dst = std::string(tokens[2]);
      const auto fields = parse_fields(std::span(tokens).subspan(3), line_no);
      reject_unknown(fields, {"eta"}, line_no);
      auto eta = fields.find("eta");
      if (eta == fields.end()) fail(line_no, "missing required field eta");
      edge.eta = parse_real(eta->second, line_no, "eta");
      if (!(edge.eta > 0.0 && edge.eta <= 1.0)) fail(line_no, "eta out of range");
      if (!edge_line.emplace(edge.src + "->" + edge.dst, line_no).second) {
        fail(line_no, "duplicate edge " + edge.src + "->" + edge.dst);
      }
      edges.push_back(std::move(edge));
    } else {
      fail(line_no, "unknown directive '" + std::string(directive) + "'");
    }
  }
  if (!name) fail(line_no, "missing header 'nornet 1 <name>'");

  return {Network(*name, std::move(nodes), std::move(edges)), std::move(node_line),
          std::move(edge_line)};
}

}  // namespace

Network parse_network_unchecked(std::string_view text) { return parse_lines(text).net; }

Network parse_network(std::string_view text) {
  ParsedNetwork parsed = parse_lines(text);
  const Network& net = parsed.net;
  if (!net.valid()) {
    const Violation& v = net.violations().front();
    std::size_t where = 0;
    if (auto it = parsed.edge_line.find(v.subject); it != parsed.edge_line.end()) {
      where = it->second;
    } else {
      const std::string first = v.subject.substr(0, v.subject.find(','));
      if (auto n = parsed.node_line.find(first); n != parsed.node_line.end()) where = n->second;
    }
    fail(where, v.rule + " violated at " + v.subject + ": " + v.detail);
  }
  return std::move(parsed.net);
}

std::string serialize_network(const Network& net) {
  std::ostringstream os;
  os << "nornet 1 " << net.name() << '\n';
  for (const Node& n : net.nodes()) {
    os << "node " << n.id << ' ' << to_string(n.kind) << " leak=" << format_real(n.leak, 17);
    if (n.prior) os << " prior=" << format_real(*n.prior, 17);
    if (n.phase) os << " phase=" << *n.phase;
    os << '\n';
  }
  for (const Edge& e : net.edges()) {
    os << "edge " << e.src << ' ' << e.dst << " eta=" << format_real(e.eta, 17) << '\n';
  }
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorClass::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Network read_network_file(const std::string& path) { return parse_network(read_text_file(path)); }

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorClass::Io, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorClass::Io, "write to '" + path + "' failed");
}

std::string provenance_csv(const ReductionReport& report) {
  std::ostringstream os;
  os << "src,dst,eta,path,composed_eta\n";
  for (const PathProvenance& p : report.provenance) {
    const double eta = *report.reduced.eta(p.src, p.dst);
    for (std::size_t i = 0; i < p.source_paths.size(); ++i) {
      std::string path;
      for (const NodeId& id : p.source_paths[i]) {
        if (!path.empty()) path += '>';
        path += id;
      }
      os << p.src << ',' << p.dst << ',' << format_real(eta, 17) << ',' << path << ','
         << format_real(p.composed_etas[i], 17) << '\n';
    }
  }
  return os.str();
}

std::string cases_csv(const Network& net, const std::vector<TestCase>& cases) {
  std::ostringstream os;
  os << "case_id,node_id,kind,phase,value\n";
  for (const TestCase& c : cases) {
    for (const Node& n : net.nodes()) {
      if (n.kind == NodeKind::Disease) {
        os << c.case_id << ',' << n.id << ",disease,," << (c.true_diseases.at(n.id) ? 1 : 0) << '\n';
      } else if (n.kind == NodeKind::Finding) {
        const bool v = c.findings_by_phase[*n.phase - 1].at(n.id);
        os << c.case_id << ',' << n.id << ",finding," << *n.phase << ',' << (v ? 1 : 0) << '\n';
      }
    }
  }
  return os.str();
}

std::string report_csv(const ExperimentSummary& summary) {
  auto cell = [](const std::optional<double>& x) { return x ? format_real(*x, 9) : std::string(); };
  std::ostringstream os;
  os << "phase,disease_id,n_cases,mean_tp_two_level,mean_tp_three_level,mean_fp_two_level,"
        "mean_fp_three_level,t_stat,df,sig95,sig975\n";
  for (const SummaryRow& r : summary.rows) {
    os << r.phase << ',' << r.disease << ',' << r.n_cases << ',' << cell(r.mean_tp_two_level) << ','
       << cell(r.mean_tp_three_level) << ',' << cell(r.mean_fp_two_level) << ','
       << cell(r.mean_fp_three_level) << ',' << cell(r.t_stat) << ',';
    if (r.t_stat) os << r.df;
    os << ',' << (r.sig95 ? 1 : 0) << ',' << (r.sig975 ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace nornet
