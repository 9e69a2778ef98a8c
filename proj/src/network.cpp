#include "airnet/network.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace airnet {

using nlohmann::json;

Network::Network(std::vector<Zone> zones, std::vector<ExternalNode> external_nodes, std::vector<Link> links)
    : zones_(std::move(zones)), external_nodes_(std::move(external_nodes)), links_(std::move(links)) {
  // First declaration wins; duplicates are reported by validate().
  for (std::size_t i = 0; i < zones_.size(); ++i)
    index_.try_emplace(zones_[i].id, NodeRef{NodeKind::Zone, i});
  for (std::size_t i = 0; i < external_nodes_.size(); ++i)
    index_.try_emplace(external_nodes_[i].id, NodeRef{NodeKind::External, i});
  endpoints_.reserve(links_.size());
  for (const auto& link : links_)
    endpoints_.push_back({find(link.from), find(link.to)});
}

std::optional<NodeRef> Network::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Violation> validate(const Network& net) {
  std::vector<Violation> out;
  const auto& zones = net.zones();
  const auto& ext = net.external_nodes();
  const auto& links = net.links();

  if (zones.empty()) out.push_back({"zones", "network needs at least one zone"});

  std::set<std::string> seen;
  auto check_id = [&](const std::string& id) {
    if (id.empty()) out.push_back({id, "empty node id"});
    else if (!seen.insert(id).second) out.push_back({id, "duplicate node id '" + id + "'"});
  };
  for (const auto& z : zones) {
    check_id(z.id);
    if (!(z.temperature_k > 0.0))
      out.push_back({z.id, "zone temperature must be > 0 K"});
  }
  for (const auto& e : ext) {
    check_id(e.id);
    for (double cp : e.cp)
      if (!(cp >= -2.0 && cp <= 2.0)) {
        out.push_back({e.id, "wind pressure coefficient outside [-2, 2]"});
        break;
      }
  }

  std::set<std::string> link_ids;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    if (!link_ids.insert(l.id).second) out.push_back({l.id, "duplicate link id '" + l.id + "'"});
    if (!net.from_node(i)) out.push_back({l.id, "unknown endpoint '" + l.from + "'"});
    if (!net.to_node(i)) out.push_back({l.id, "unknown endpoint '" + l.to + "'"});
    if (l.from == l.to) out.push_back({l.id, "link connects a node to itself"});
    if (const auto* c = std::get_if<Crack>(&l.model)) {
      if (!(c->k > 0.0)) out.push_back({l.id, "crack coefficient k must be > 0"});
      if (!(c->n >= 0.5 && c->n <= 1.0)) out.push_back({l.id, "crack exponent out of range [0.5, 1]"});
    } else if (const auto* o = std::get_if<LargeOpening>(&l.model)) {
      if (!(o->width_m > 0.0)) out.push_back({l.id, "opening width must be > 0"});
      if (!(o->height_m > 0.0)) out.push_back({l.id, "opening height must be > 0"});
      if (!(o->cd > 0.0 && o->cd <= 1.0)) out.push_back({l.id, "discharge coefficient out of range (0, 1]"});
    }
  }

  // Zones must connect to the outside through links of any kind that carry
  // a pressure-dependent flow. Fans do not fix a pressure.
  std::vector<std::vector<std::size_t>> adj(zones.size());
  std::vector<bool> reached(zones.size(), false);
  std::queue<std::size_t> frontier;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (std::holds_alternative<Fan>(links[i].model)) continue;
    auto a = net.from_node(i);
    auto b = net.to_node(i);
    if (!a || !b) continue;
    if (a->kind == NodeKind::Zone && b->kind == NodeKind::Zone) {
      adj[a->index].push_back(b->index);
      adj[b->index].push_back(a->index);
    } else if (a->kind == NodeKind::Zone && b->kind == NodeKind::External) {
      frontier.push(a->index);
    } else if (b->kind == NodeKind::Zone && a->kind == NodeKind::External) {
      frontier.push(b->index);
    }
  }
  while (!frontier.empty()) {
    auto z = frontier.front();
    frontier.pop();
    if (reached[z]) continue;
    reached[z] = true;
    for (auto n : adj[z])
      if (!reached[n]) frontier.push(n);
  }
  for (std::size_t i = 0; i < zones.size(); ++i)
    if (!reached[i]) out.push_back({zones[i].id, "unreachable zone: no pressure path to an external node"});

  return out;
}

namespace {

std::string describe(const std::vector<Violation>& v) {
  std::ostringstream os;
  os << v.size() << " validation error(s)";
  for (const auto& x : v) os << "\n  " << x.subject << ": " << x.message;
  return os.str();
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object", path);
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key + ": missing field", path + "." + key);
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number()) throw SchemaError(path + "." + key + ": expected a number", path + "." + key);
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  return number(obj, key, path);
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key + ": expected a string", path + "." + key);
  return v.get<std::string>();
}

const json& array(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_array()) throw SchemaError(path + "." + key + ": expected an array", path + "." + key);
  return v;
}

LinkModel parse_model(const json& m, const std::string& path) {
  auto type = text(m, "type", path);
  if (type == "crack") return Crack{number(m, "k", path), number(m, "n", path)};
  if (type == "large_opening")
    return LargeOpening{number(m, "width_m", path), number(m, "height_m", path), number_or(m, "cd", path, 0.6)};
  if (type == "fan") return Fan{number(m, "flow_kg_s", path)};
  throw SchemaError(path + ".type: unknown link model '" + type + "'", path + ".type");
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(describe(violations)), violations_(std::move(violations)) {}

Network parse_network(std::string_view text_in) {
  json doc;
  try {
    doc = json::parse(text_in.begin(), text_in.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    auto [line, col] = line_column(text_in, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what(),
                     line, col);
  }
  if (!doc.is_object()) throw SchemaError("document: expected an object", "document");

  std::set<std::string> ids;
  auto claim = [&](const std::string& id, const std::string& path) {
    if (!ids.insert(id).second) throw SchemaError(path + ".id: duplicate node id '" + id + "'", id);
  };

  std::vector<Zone> zones;
  const auto& jz = array(doc, "zones", "document");
  for (std::size_t i = 0; i < jz.size(); ++i) {
    auto path = "zones[" + std::to_string(i) + "]";
    Zone z;
    z.id = text(jz[i], "id", path);
    claim(z.id, path);
    z.temperature_k = number(jz[i], "temperature_k", path);
    z.ref_height_m = number(jz[i], "ref_height_m", path);
    z.mech_flow_kg_s = number_or(jz[i], "mech_flow_kg_s", path, 0.0);
    zones.push_back(std::move(z));
  }

  std::vector<ExternalNode> ext;
  const auto& je = array(doc, "external_nodes", "document");
  for (std::size_t i = 0; i < je.size(); ++i) {
    auto path = "external_nodes[" + std::to_string(i) + "]";
    ExternalNode e;
    e.id = text(je[i], "id", path);
    claim(e.id, path);
    e.ref_height_m = number(je[i], "ref_height_m", path);
    const auto& cp = array(je[i], "cp", path);
    if (cp.size() != 8) throw SchemaError(path + ".cp: expected 8 coefficients", path + ".cp");
    for (std::size_t k = 0; k < 8; ++k) {
      if (!cp[k].is_number()) throw SchemaError(path + ".cp: expected numbers", path + ".cp");
      e.cp[k] = cp[k].get<double>();
    }
    ext.push_back(std::move(e));
  }

  std::vector<Link> links;
  const auto& jl = array(doc, "links", "document");
  for (std::size_t i = 0; i < jl.size(); ++i) {
    auto path = "links[" + std::to_string(i) + "]";
    Link l;
    l.id = text(jl[i], "id", path);
    l.from = text(jl[i], "from", path);
    l.to = text(jl[i], "to", path);
    l.elevation_m = number(jl[i], "elevation_m", path);
    l.model = parse_model(field(jl[i], "model", path), path + ".model");
    links.push_back(std::move(l));
  }

  Network net(std::move(zones), std::move(ext), std::move(links));
  if (auto v = validate(net); !v.empty()) throw ValidationError(std::move(v));
  return net;
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open network file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

std::string serialize_network(const Network& net) {
  json doc;
  doc["zones"] = json::array();
  for (const auto& z : net.zones())
    doc["zones"].push_back({{"id", z.id},
                            {"temperature_k", z.temperature_k},
                            {"ref_height_m", z.ref_height_m},
                            {"mech_flow_kg_s", z.mech_flow_kg_s}});
  doc["external_nodes"] = json::array();
  for (const auto& e : net.external_nodes())
    doc["external_nodes"].push_back({{"id", e.id}, {"ref_height_m", e.ref_height_m}, {"cp", e.cp}});
  doc["links"] = json::array();
  for (const auto& l : net.links()) {
    json model = std::visit(
        [](const auto& m) -> json {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, Crack>) return {{"type", "crack"}, {"k", m.k}, {"n", m.n}};
          else if constexpr (std::is_same_v<T, LargeOpening>)
            return {{"type", "large_opening"}, {"width_m", m.width_m}, {"height_m", m.height_m}, {"cd", m.cd}};
          else return {{"type", "fan"}, {"flow_kg_s", m.flow_kg_s}};
        },
        l.model);
    doc["links"].push_back(
        {{"id", l.id}, {"from", l.from}, {"to", l.to}, {"elevation_m", l.elevation_m}, {"model", model}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace airnet
