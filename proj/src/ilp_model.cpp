#include <algorithm>
#include <sstream>

#include "mapfdl/ilp.hpp"
#include "mapfdl/invariant.hpp"

namespace mapfdl {
namespace ilp {

int IlpModel::var_of_arc(int commodity, int arc) const {
  const auto& pairs = arc_vars[commodity];
  const auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair<int, int>{arc, -1});
  if (it == pairs.end() || it->first != arc) return -1;
  return it->second;
}

IlpModel build_ilp(const ReducedNetwork& reduced) {
  const FlowNetwork& net = reduced.network;
  const int commodity_count = static_cast<int>(net.commodities.size());

  IlpModel model;
  model.num_commodities = commodity_count;
  model.arc_vars.resize(commodity_count);

  for (int i = 0; i < commodity_count; ++i) model.var_names.push_back("y_" + std::to_string(i));
  for (int i = 0; i < commodity_count; ++i) {
    model.arc_vars[i].reserve(reduced.admissible_arcs[i].size());
    for (const int arc : reduced.admissible_arcs[i]) {
      const int var = model.var_count();
      model.var_names.push_back("x_" + std::to_string(i) + "_" +
                                std::to_string(net.arcs[arc].tail) + "_" +
                                std::to_string(net.arcs[arc].head));
      model.arc_vars[i].emplace_back(arc, var);
    }
  }

  // Per-commodity flow rows: source outflow = y_i, sink inflow = y_i, and
  // conservation at every other admissible node touched by an admissible arc.
  for (int i = 0; i < commodity_count; ++i) {
    const int source = net.commodities[i].source;
    const int sink = net.commodities[i].sink;

    // Incident admissible arcs bucketed by node, in arc order.
    std::vector<std::pair<int, int>> by_tail;  // (node, var)
    std::vector<std::pair<int, int>> by_head;
    by_tail.reserve(model.arc_vars[i].size());
    by_head.reserve(model.arc_vars[i].size());
    for (const auto& [arc, var] : model.arc_vars[i]) {
      by_tail.emplace_back(net.arcs[arc].tail, var);
      by_head.emplace_back(net.arcs[arc].head, var);
    }
    std::stable_sort(by_tail.begin(), by_tail.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::stable_sort(by_head.begin(), by_head.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::size_t ti = 0;
    std::size_t hi = 0;
    LinRow src_row{"src_" + std::to_string(i), {}, Sense::eq, 0};
    LinRow snk_row{"snk_" + std::to_string(i), {}, Sense::eq, 0};
    std::vector<LinRow> conservation;

    while (ti < by_tail.size() || hi < by_head.size()) {
      int node = -1;
      if (ti < by_tail.size()) node = by_tail[ti].first;
      if (hi < by_head.size() && (node < 0 || by_head[hi].first < node)) node = by_head[hi].first;

      LinRow row;
      for (; ti < by_tail.size() && by_tail[ti].first == node; ++ti)
        row.terms.push_back({by_tail[ti].second, +1});
      for (; hi < by_head.size() && by_head[hi].first == node; ++hi)
        row.terms.push_back({by_head[hi].second, -1});

      if (node == source) {
        src_row.terms = std::move(row.terms);
        src_row.terms.push_back({model.y_var(i), -1});
      } else if (node == sink) {
        // Keep inflow positive: sum of inflow - y_i = 0.
        for (LinTerm& term : row.terms) term.coef = -term.coef;
        snk_row.terms = std::move(row.terms);
        snk_row.terms.push_back({model.y_var(i), -1});
      } else {
        row.name = "flow_" + std::to_string(i) + "_" + std::to_string(node);
        row.sense = Sense::eq;
        row.rhs = 0;
        conservation.push_back(std::move(row));
      }
    }
    // The source always has outgoing admissible arcs (its internal arc), the
    // sink incoming ones; both rows tie the flow to the success indicator.
    MAPFDL_INVARIANT(src_row.terms.size() >= 2);
    MAPFDL_INVARIANT(snk_row.terms.size() >= 2);
    model.rows.push_back(std::move(src_row));
    model.rows.push_back(std::move(snk_row));
    for (LinRow& row : conservation) model.rows.push_back(std::move(row));
  }

  // Joint capacity on unit arcs shared by two or more commodities.
  std::vector<std::vector<LinTerm>> users;  // indexed by position in unit arc order
  std::vector<int> unit_arc_ids;
  {
    std::vector<int> unit_index(net.arcs.size(), -1);
    for (int a = 0; a < static_cast<int>(net.arcs.size()); ++a) {
      if (FlowNetwork::unit_capacity(net.arcs[a])) {
        unit_index[a] = static_cast<int>(unit_arc_ids.size());
        unit_arc_ids.push_back(a);
      }
    }
    users.resize(unit_arc_ids.size());
    for (int i = 0; i < commodity_count; ++i) {
      for (const auto& [arc, var] : model.arc_vars[i]) {
        if (unit_index[arc] >= 0) users[unit_index[arc]].push_back({var, +1});
      }
    }
  }
  for (std::size_t k = 0; k < unit_arc_ids.size(); ++k) {
    if (users[k].size() < 2) continue;  // binary domain already caps one user
    const Arc& arc = net.arcs[unit_arc_ids[k]];
    model.rows.push_back(LinRow{"cap_" + std::to_string(arc.tail) + "_" +
                                    std::to_string(arc.head),
                                std::move(users[k]), Sense::le, 1});
  }

  return model;
}

namespace {

void append_term(std::string& line, bool first, int coef, const std::string& name) {
  MAPFDL_INVARIANT(coef == 1 || coef == -1);
  if (first) {
    if (coef < 0) line += "- ";
  } else {
    line += coef < 0 ? " - " : " + ";
  }
  line += name;
}

void write_row(std::ostringstream& out, const IlpModel& model, const LinRow& row) {
  std::string line = " " + row.name + ":";
  bool first = true;
  for (const LinTerm& term : row.terms) {
    std::string piece;
    append_term(piece, first, term.coef, model.var_names[term.var]);
    if (line.size() + piece.size() > 200) {
      out << line << "\n";
      line = "   ";
    }
    line += (first ? " " : "") + piece;
    first = false;
  }
  line += row.sense == Sense::eq ? " = " : " <= ";
  line += std::to_string(row.rhs);
  out << line << "\n";
}

}  // namespace

std::string export_model(const IlpModel& model) {
  std::ostringstream out;
  out << "\\ mapfdl time-expanded multi-commodity flow\n";
  out << "Maximize\n";
  {
    std::string line = " obj:";
    for (int i = 0; i < model.num_commodities; ++i) {
      std::string piece = (i == 0 ? " " : " + ") + model.var_names[model.y_var(i)];
      if (line.size() + piece.size() > 200) {
        out << line << "\n";
        line = "  ";
        piece = (i == 0 ? " " : " + ") + model.var_names[model.y_var(i)];
      }
      line += piece;
    }
    out << line << "\n";
  }
  out << "Subject To\n";
  for (const LinRow& row : model.rows) write_row(out, model, row);
  out << "Binary\n";
  for (const std::string& name : model.var_names) out << " " << name << "\n";
  out << "End\n";
  return out.str();
}

ParsedLp parse_model(const std::string& text) {
  ParsedLp parsed;
  std::istringstream in(text);
  std::string line;
  enum class Section { none, objective, constraints, binary };
  Section section = Section::none;

  const auto is_var = [](const std::string& token) {
    return !token.empty() && (std::isalpha(static_cast<unsigned char>(token[0])) || token[0] == '_');
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '\\') continue;
    std::istringstream tokens(line);
    std::string token;
    std::vector<std::string> row;
    while (tokens >> token) row.push_back(token);
    if (row.empty()) continue;

    std::string joined = row[0];
    for (std::size_t i = 1; i < row.size(); ++i) joined += " " + row[i];
    if (joined == "Maximize" || joined == "Minimize") {
      section = Section::objective;
      continue;
    }
    if (joined == "Subject To") {
      section = Section::constraints;
      continue;
    }
    if (joined == "Binary") {
      section = Section::binary;
      continue;
    }
    if (joined == "End") break;

    for (std::string& tok : row) {
      const bool labels_row = tok.size() > 1 && tok.back() == ':';
      if (labels_row) {
        // A label opens a new constraint row.
        if (section == Section::constraints) ++parsed.constraint_count;
        continue;
      }
      if (!is_var(tok)) continue;
      parsed.variables.insert(tok);
      if (section == Section::objective) ++parsed.objective_term_count;
      if (section == Section::binary) parsed.binary_vars.push_back(tok);
    }
  }
  return parsed;
}

bool assignment_satisfies(const IlpModel& model, const std::vector<double>& assignment,
                          std::string* why) {
  constexpr double kEps = 1e-6;
  if (assignment.size() != static_cast<std::size_t>(model.var_count())) {
    if (why) *why = "assignment size mismatch";
    return false;
  }
  for (int v = 0; v < model.var_count(); ++v) {
    const double x = assignment[v];
    if (std::abs(x) > kEps && std::abs(x - 1.0) > kEps) {
      if (why) *why = "variable " + model.var_names[v] + " not binary: " + std::to_string(x);
      return false;
    }
  }
  for (const LinRow& row : model.rows) {
    double lhs = 0.0;
    for (const LinTerm& term : row.terms) lhs += term.coef * assignment[term.var];
    const bool ok = row.sense == Sense::eq ? std::abs(lhs - row.rhs) <= kEps
                                           : lhs <= row.rhs + kEps;
    if (!ok) {
      if (why)
        *why = "row " + row.name + " violated: lhs=" + std::to_string(lhs) +
               " rhs=" + std::to_string(row.rhs);
      return false;
    }
  }
  return true;
}

}  // namespace ilp
}  // namespace mapfdl
