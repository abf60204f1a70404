#include "csi/diagram.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "csi/errors.hpp"

namespace csi {

SupportModel::SupportModel(std::vector<std::string> names, ComponentKind kind)
    : SupportModel(names, std::vector<ComponentKind>(names.size(), kind)) {}

SupportModel::SupportModel(std::vector<std::string> names, std::vector<ComponentKind> kinds)
    : names_(std::move(names)), kinds_(std::move(kinds)) {
  if (names_.empty()) throw StructureError("support needs at least one component");
  if (names_.size() != kinds_.size()) throw StructureError("support kinds do not match names");
  auto sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw StructureError("support component names must be distinct");
}

SupportModel SupportModel::circles(int count) {
  if (count < 1) throw InputError("need at least one circle");
  if (count == 1) return circle();
  std::vector<std::string> names;
  for (int i = 1; i <= count; ++i) names.push_back("m" + std::to_string(i));
  return SupportModel(names);
}

SupportModel SupportModel::parse(const std::string& text) {
  if (text == "S1") return circle();
  if (text == "J" || text == "R") return line();
  if (text.size() > 2 && text.substr(text.size() - 2) == "S1") {
    std::string head = text.substr(0, text.size() - 2);
    if (!head.empty() && std::all_of(head.begin(), head.end(), ::isdigit)) return circles(std::stoi(head));
  }
  throw InputError("unknown support '" + text + "' (expected S1, <k>S1 or J)");
}

int SupportModel::index_of(const std::string& name) const {
  for (int c = 0; c < size(); ++c)
    if (names_[c] == name) return c;
  throw InputError("unknown component '" + name + "'");
}

std::string SupportModel::describe() const {
  std::string out;
  for (int c = 0; c < size(); ++c) {
    if (c) out += " ";
    out += names_[c] + (is_line(c) ? "(line)" : "(circle)");
  }
  return out;
}

Diagram::Diagram(SupportModel support, std::vector<std::vector<int>> placements, std::vector<int> trivalent,
                 std::vector<Edge> edges, std::vector<std::string> names)
    : support_(std::move(support)),
      placements_(std::move(placements)),
      trivalent_(std::move(trivalent)),
      edges_(std::move(edges)),
      names_(std::move(names)) {
  if (support_.size() == 0) throw StructureError("diagram without support");
  if (static_cast<int>(placements_.size()) != support_.size())
    throw StructureError("placements do not match the support components");
  int total = static_cast<int>(trivalent_.size());
  for (const auto& p : placements_) total += static_cast<int>(p.size());
  component_.assign(total, -2);
  rank_.assign(total, -1);
  auto claim = [&](int v) {
    if (v < 0 || v >= total) throw StructureError("vertex ids must be 0..V-1");
    if (component_[v] != -2) throw StructureError("vertex " + std::to_string(v) + " listed twice");
  };
  for (int c = 0; c < support_.size(); ++c)
    for (int i = 0; i < static_cast<int>(placements_[c].size()); ++i) {
      int v = placements_[c][i];
      claim(v);
      component_[v] = c;
      rank_[v] = i;
      ++univalent_;
    }
  for (int t : trivalent_) {
    claim(t);
    component_[t] = -1;
  }
  std::sort(trivalent_.begin(), trivalent_.end());
  if (!names_.empty() && static_cast<int>(names_.size()) != total)
    throw StructureError("vertex name table has the wrong size");

  adjacency_.assign(total, {});
  for (auto& e : edges_) {
    if (e.a == e.b) throw StructureError("loop at vertex " + std::to_string(e.a));
    if (e.a < 0 || e.b < 0 || e.a >= total || e.b >= total) throw StructureError("edge endpoint out of range");
    if (e.a > e.b) std::swap(e.a, e.b);
    adjacency_[e.a].push_back(e.b);
    adjacency_[e.b].push_back(e.a);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) throw StructureError("double edge");
  for (int v = 0; v < total; ++v) {
    std::sort(adjacency_[v].begin(), adjacency_[v].end());
    int want = is_univalent(v) ? 1 : 3;
    if (static_cast<int>(adjacency_[v].size()) != want)
      throw StructureError("vertex " + name(v) + " has valence " + std::to_string(adjacency_[v].size()) +
                           ", expected " + std::to_string(want));
  }
  // Every connected component must meet U.
  std::vector<int> seen(total, 0);
  std::vector<int> stack;
  for (int v = 0; v < total; ++v)
    if (is_univalent(v) && !seen[v]) {
      seen[v] = 1;
      stack.push_back(v);
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adjacency_[x])
          if (!seen[y]) {
            seen[y] = 1;
            stack.push_back(y);
          }
      }
    }
  for (int v = 0; v < total; ++v)
    if (!seen[v]) throw StructureError("a connected component of the graph misses the support");
}

Diagram Diagram::empty(SupportModel support) {
  std::vector<std::vector<int>> placements(support.size());
  return Diagram(std::move(support), std::move(placements), {}, {});
}

bool Diagram::adjacent(int v, int w) const {
  const auto& a = adjacency_.at(v);
  return std::binary_search(a.begin(), a.end(), w);
}

std::string Diagram::name(int v) const {
  if (!names_.empty()) return names_.at(v);
  return (is_univalent(v) ? "u" : "t") + std::to_string(v);
}

int triple_sign(int a, int b, int c) {
  int inversions = (a > b) + (a > c) + (b > c);
  return inversions % 2 == 0 ? 1 : -1;
}

OrientedDiagram::OrientedDiagram(Diagram d) : base_(std::move(d)) {
  int n = base_.vertex_count();
  cyclic_.assign(n, {-1, -1, -1});
  bit_.assign(n, 0);
  for (int v = 0; v < n; ++v) {
    if (base_.is_univalent(v)) {
      bit_[v] = 1;
    } else {
      const auto& nb = base_.neighbors(v);
      cyclic_[v] = {nb[0], nb[1], nb[2]};
    }
  }
}

void OrientedDiagram::set_cyclic(int t, std::array<int, 3> order) {
  if (base_.is_univalent(t)) throw StructureError("cyclic order given for a univalent vertex");
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  const auto& nb = base_.neighbors(t);
  if (!std::equal(sorted.begin(), sorted.end(), nb.begin()))
    throw StructureError("cyclic order at " + base_.name(t) + " is not a permutation of its edges");
  cyclic_[t] = order;
}

void OrientedDiagram::set_bit(int u, int bit) {
  if (!base_.is_univalent(u)) throw StructureError("orientation bit given for a trivalent vertex");
  if (bit != 1 && bit != -1) throw StructureError("orientation bit must be +1 or -1");
  bit_[u] = bit;
}

OrientedDiagram OrientedDiagram::flipped(int v) const {
  OrientedDiagram out = *this;
  if (base_.is_univalent(v)) {
    out.bit_[v] = -bit_[v];
  } else {
    auto c = cyclic_[v];
    out.cyclic_[v] = {c[1], c[0], c[2]};
  }
  return out;
}

DiagramBuilder DiagramBuilder::from(const OrientedDiagram& od) {
  const Diagram& d = od.diagram();
  DiagramBuilder b;
  b.support = d.support();
  b.placements = d.placements();
  b.trivalent = d.trivalent();
  b.edges = d.edges();
  b.next_id = d.vertex_count();
  b.cyclic.assign(b.next_id, {-1, -1, -1});
  b.bits.assign(b.next_id, 0);
  for (int v = 0; v < d.vertex_count(); ++v) {
    if (d.is_univalent(v))
      b.bits[v] = od.bit(v);
    else
      b.cyclic[v] = od.cyclic(v);
  }
  return b;
}

int DiagramBuilder::add_univalent(int comp, int position, int bit) {
  int id = next_id++;
  cyclic.push_back({-1, -1, -1});
  bits.push_back(bit);
  auto& p = placements.at(comp);
  p.insert(p.begin() + position, id);
  return id;
}

int DiagramBuilder::add_trivalent(std::array<int, 3> order) {
  int id = next_id++;
  cyclic.push_back(order);
  bits.push_back(0);
  trivalent.push_back(id);
  return id;
}

void DiagramBuilder::remove_edge(int a, int b) {
  for (auto it = edges.begin(); it != edges.end(); ++it)
    if ((it->a == a && it->b == b) || (it->a == b && it->b == a)) {
      edges.erase(it);
      return;
    }
  throw StructureError("edge to remove not present");
}

void DiagramBuilder::remove_vertex(int v) {
  for (auto& p : placements) p.erase(std::remove(p.begin(), p.end(), v), p.end());
  trivalent.erase(std::remove(trivalent.begin(), trivalent.end(), v), trivalent.end());
}

void DiagramBuilder::rename_in_cyclic(int t, int from, int to) {
  for (int& x : cyclic.at(t))
    if (x == from) {
      x = to;
      return;
    }
  throw StructureError("cyclic order does not contain the renamed neighbour");
}

std::vector<int> DiagramBuilder::compaction() const {
  std::vector<int> compact(next_id, -1);
  int next = 0;
  for (const auto& p : placements)
    for (int v : p) compact.at(v) = next++;
  for (int t : trivalent) compact.at(t) = next++;
  return compact;
}

OrientedDiagram DiagramBuilder::build() const {
  std::vector<int> compact = compaction();
  std::vector<std::vector<int>> pl(placements.size());
  for (size_t c = 0; c < placements.size(); ++c)
    for (int v : placements[c]) pl[c].push_back(compact[v]);
  std::vector<int> tr;
  for (int t : trivalent) tr.push_back(compact[t]);
  std::vector<Edge> es;
  for (const auto& e : edges) {
    if (compact.at(e.a) < 0 || compact.at(e.b) < 0) throw StructureError("edge touches a removed vertex");
    es.push_back({compact[e.a], compact[e.b]});
  }
  OrientedDiagram od(Diagram(support, pl, tr, es));
  for (size_t c = 0; c < placements.size(); ++c)
    for (int v : placements[c]) od.set_bit(compact[v], bits.at(v));
  for (int t : trivalent) {
    const auto& o = cyclic.at(t);
    od.set_cyclic(compact[t], {compact.at(o[0]), compact.at(o[1]), compact.at(o[2])});
  }
  return od;
}

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

OrientedDiagram parse_diagram(const std::string& text) {
  std::vector<std::string> comp_names;
  std::vector<ComponentKind> comp_kinds;
  std::vector<std::vector<std::string>> comp_vertices;
  std::vector<std::string> trivalent_names;
  std::vector<std::pair<std::string, std::string>> edge_names;
  std::vector<std::pair<std::string, std::vector<std::string>>> orients;
  std::vector<std::string> reversed;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw InputError("line " + std::to_string(lineno) + ": missing ':'");
    auto head = words(line.substr(0, colon));
    auto body = words(line.substr(colon + 1));
    if (head.empty()) throw InputError("line " + std::to_string(lineno) + ": empty keyword");
    const std::string& key = head[0];
    if ((key == "component" || key == "line") && head.size() == 2) {
      comp_names.push_back(head[1]);
      comp_kinds.push_back(key == "line" ? ComponentKind::line : ComponentKind::circle);
      comp_vertices.push_back(body);
    } else if (key == "trivalent" && head.size() == 1) {
      trivalent_names.insert(trivalent_names.end(), body.begin(), body.end());
    } else if (key == "edges" && head.size() == 1) {
      for (const auto& w : body) {
        auto dash = w.find('-');
        if (dash == std::string::npos || dash == 0 || dash + 1 == w.size())
          throw InputError("line " + std::to_string(lineno) + ": bad edge '" + w + "'");
        edge_names.emplace_back(w.substr(0, dash), w.substr(dash + 1));
      }
    } else if (key == "orient" && head.size() == 2) {
      if (body.size() != 3) throw InputError("line " + std::to_string(lineno) + ": orient needs three names");
      orients.emplace_back(head[1], body);
    } else if (key == "reversed" && head.size() == 1) {
      reversed.insert(reversed.end(), body.begin(), body.end());
    } else {
      throw InputError("line " + std::to_string(lineno) + ": unknown keyword '" + line.substr(0, colon) + "'");
    }
  }
  if (comp_names.empty()) throw InputError("diagram has no component line");

  std::map<std::string, int> id;
  std::vector<std::string> names;
  auto add = [&](const std::string& n) {
    if (id.count(n)) throw InputError("vertex '" + n + "' declared twice");
    id[n] = static_cast<int>(names.size());
    names.push_back(n);
  };
  std::vector<std::vector<int>> placements;
  for (const auto& vs : comp_vertices) {
    placements.emplace_back();
    for (const auto& v : vs) {
      add(v);
      placements.back().push_back(id[v]);
    }
  }
  std::vector<int> trivalent;
  for (const auto& t : trivalent_names) {
    add(t);
    trivalent.push_back(id[t]);
  }
  auto lookup = [&](const std::string& n) {
    auto it = id.find(n);
    if (it == id.end()) throw InputError("undeclared vertex '" + n + "'");
    return it->second;
  };
  std::vector<Edge> edges;
  for (const auto& [a, b] : edge_names) edges.push_back({lookup(a), lookup(b)});

  Diagram d;
  try {
    d = Diagram(SupportModel(comp_names, comp_kinds), placements, trivalent, edges, names);
  } catch (const StructureError& e) {
    throw InputError(std::string("invalid diagram: ") + e.what());
  }
  OrientedDiagram od(d);
  try {
    for (const auto& [t, ns] : orients) od.set_cyclic(lookup(t), {lookup(ns[0]), lookup(ns[1]), lookup(ns[2])});
    for (const auto& u : reversed) od.set_bit(lookup(u), -1);
  } catch (const StructureError& e) {
    throw InputError(std::string("invalid orientation: ") + e.what());
  }
  return od;
}

std::string format_diagram(const OrientedDiagram& od) {
  const Diagram& d = od.diagram();
  std::ostringstream out;
  for (int c = 0; c < d.support().size(); ++c) {
    out << (d.support().is_line(c) ? "line " : "component ") << d.support().name(c) << ":";
    for (int v : d.placements()[c]) out << " " << d.name(v);
    out << "\n";
  }
  if (d.trivalent_count() > 0) {
    out << "trivalent:";
    for (int t : d.trivalent()) out << " " << d.name(t);
    out << "\n";
  }
  if (d.edge_count() > 0) {
    out << "edges:";
    for (const auto& e : d.edges()) out << " " << d.name(e.a) << "-" << d.name(e.b);
    out << "\n";
  }
  for (int t : d.trivalent()) {
    const auto& c = od.cyclic(t);
    out << "orient " << d.name(t) << ": " << d.name(c[0]) << " " << d.name(c[1]) << " " << d.name(c[2]) << "\n";
  }
  std::vector<int> rev;
  for (int v = 0; v < d.vertex_count(); ++v)
    if (d.is_univalent(v) && od.bit(v) < 0) rev.push_back(v);
  if (!rev.empty()) {
    out << "reversed:";
    for (int v : rev) out << " " << d.name(v);
    out << "\n";
  }
  return out.str();
}

std::string format_diagram(const Diagram& d) { return format_diagram(OrientedDiagram(d)); }

std::vector<std::string> split_records(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line, cur;
  auto flush = [&] {
    std::istringstream lines(cur);
    std::string l;
    bool content = false;
    while (std::getline(lines, l)) content = content || !trim(strip_comment(l)).empty();
    if (content) out.push_back(cur);
    cur.clear();
  };
  while (std::getline(in, line)) {
    if (trim(line) == "---") {
      flush();
    } else {
      cur += line + "\n";
    }
  }
  flush();
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace csi
