#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace airnet {

/// A well-mixed room whose reference pressure is solved for.
struct Zone {
  std::string id;
  double temperature_k = 293.15;
  double ref_height_m = 0.0;
  /// Imposed mechanical ventilation, positive into the zone.
  double mech_flow_kg_s = 0.0;

  bool operator==(const Zone&) const = default;
};

/// Outdoor facade node; its pressure comes from the wind and the outdoor air.
struct ExternalNode {
  std::string id;
  double ref_height_m = 0.0;
  /// Wind pressure coefficients for sectors centred on 0, 45, ..., 315 degrees.
  std::array<double, 8> cp{};

  bool operator==(const ExternalNode&) const = default;
};

/// Power-law crack: m = K * dp^n.
struct Crack {
  double k = 0.0;
  double n = 0.65;

  bool operator==(const Crack&) const = default;
};

/// Vertical door or window with possible two-way flow over its height.
struct LargeOpening {
  double width_m = 0.0;
  double height_m = 0.0;
  double cd = 0.6;

  bool operator==(const LargeOpening&) const = default;
};

/// Fixed mass flow from `from` to `to`.
struct Fan {
  double flow_kg_s = 0.0;

  bool operator==(const Fan&) const = default;
};

using LinkModel = std::variant<Crack, LargeOpening, Fan>;

struct Link {
  std::string id;
  std::string from;
  std::string to;
  /// Crack midpoint, or the bottom edge of a large opening.
  double elevation_m = 0.0;
  LinkModel model;

  bool operator==(const Link&) const = default;
};

enum class NodeKind { Zone, External };

struct NodeRef {
  NodeKind kind;
  std::size_t index;

  bool operator==(const NodeRef&) const = default;
};

struct Violation {
  std::string subject;
  std::string message;
};

/// Immutable airflow network. Construction never throws on invariant
/// violations; call validate() to list them.
class Network {
 public:
  Network() = default;
  Network(std::vector<Zone> zones, std::vector<ExternalNode> external_nodes, std::vector<Link> links);

  const std::vector<Zone>& zones() const { return zones_; }
  const std::vector<ExternalNode>& external_nodes() const { return external_nodes_; }
  const std::vector<Link>& links() const { return links_; }

  std::size_t zone_count() const { return zones_.size(); }

  std::optional<NodeRef> find(std::string_view id) const;

  /// Resolved endpoints of link i; empty if either end is unknown.
  std::optional<NodeRef> from_node(std::size_t link) const { return endpoints_[link][0]; }
  std::optional<NodeRef> to_node(std::size_t link) const { return endpoints_[link][1]; }

  bool operator==(const Network& other) const {
    return zones_ == other.zones_ && external_nodes_ == other.external_nodes_ && links_ == other.links_;
  }

 private:
  std::vector<Zone> zones_;
  std::vector<ExternalNode> external_nodes_;
  std::vector<Link> links_;
  std::unordered_map<std::string, NodeRef> index_;
  std::vector<std::array<std::optional<NodeRef>, 2>> endpoints_;
};

/// Lists every invariant violation, not only the first.
std::vector<Violation> validate(const Network& net);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& what, std::string field)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Parses the JSON network format. Throws ParseError, SchemaError or
/// ValidationError.
Network parse_network(std::string_view text);
Network load_network(const std::string& path);
std::string serialize_network(const Network& net);

}  // namespace airnet
