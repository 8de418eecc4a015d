#pragma once

// Scenario file reader and writer. The grammar is documented in
// docs/scenario-format.md; serialize_scenario() emits the canonical form.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "antguard/scenario/config.hpp"

namespace antguard {

/// Decode `\xNN` escapes. Any other backslash is an error.
inline std::optional<Bytes> unescape_bytes(std::string_view s) {
  Bytes out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 3 >= s.size() || s[i + 1] != 'x') return std::nullopt;
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data() + i + 2, s.data() + i + 4, v, 16);
    if (ec != std::errc() || ptr != s.data() + i + 4) return std::nullopt;
    out.push_back(static_cast<char>(v));
    i += 3;
  }
  return out;
}

/// Printable bytes other than '\\', '#', '=' and '[' pass through; the
/// rest become `\xNN`.
inline std::string escape_bytes(std::string_view b) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : b) {
    if (c > 0x20 && c < 0x7F && c != '\\' && c != '#' && c != '=' && c != '[') {
      out.push_back(static_cast<char>(c));
    } else {
      out += "\\x";
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    }
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    auto j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineParser {
 public:
  explicit LineParser(int line) : line_(line) {}

  [[noreturn]] void fail(std::string_view field, const std::string& why) const {
    throw ConfigError("line " + std::to_string(line_) + ": field '" + std::string(field) + "': " + why);
  }

  template <typename T>
  T number(std::string_view field, std::string_view text) const {
    auto v = parse_number<T>(text);
    if (!v) fail(field, "invalid number '" + std::string(text) + "'");
    return *v;
  }

  NodeId node(std::string_view field, std::string_view text) const {
    return NodeId(number<std::uint32_t>(field, text));
  }

  Bytes bytes(std::string_view field, std::string_view text) const {
    auto v = unescape_bytes(text);
    if (!v) fail(field, "bad escape in '" + std::string(text) + "'");
    return *v;
  }

  bool boolean(std::string_view field, std::string_view text) const {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    fail(field, "expected true or false");
  }

  int line() const { return line_; }

 private:
  int line_;
};

// Splits `key=value` tokens after the leading keyword.
inline std::vector<std::pair<std::string_view, std::string_view>> key_values(
    const LineParser& lp, const std::vector<std::string_view>& tokens) {
  std::vector<std::pair<std::string_view, std::string_view>> out;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) lp.fail(tokens[i], "expected key=value");
    out.emplace_back(tokens[i].substr(0, eq), tokens[i].substr(eq + 1));
  }
  return out;
}

}  // namespace detail

/// Parse scenario text. Defaults fill every omitted parameter; the result is
/// validated before it is returned.
inline ScenarioConfig parse_scenario(std::string_view text) {
  using detail::LineParser;
  ScenarioConfig cfg;
  enum class Section { none, topology, params, legit, attack, patterns } section = Section::none;

  struct PendingAttack {
    AttackSpec spec;
    int line;
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    LineParser lp(line_no);

    if (line.front() == '[') {
      if (line == "[topology]") section = Section::topology;
      else if (line == "[params]") section = Section::params;
      else if (line == "[legit]") section = Section::legit;
      else if (line == "[attack]") section = Section::attack;
      else if (line == "[patterns]") section = Section::patterns;
      else lp.fail(line, "unknown section");
      continue;
    }

    switch (section) {
      case Section::none:
        lp.fail(line, "content before the first section header");

      case Section::topology: {
        const auto t = detail::split_ws(line);
        if (t[0] == "node") {
          if (t.size() != 4 && t.size() != 6) lp.fail("node", "expected: node <id> <kind> <buffer_capacity> [<x> <y>]");
          NodeDescriptor d;
          d.id = lp.node("node", t[1]);
          auto kind = parse_node_kind(t[2]);
          if (!kind) lp.fail("kind", "unknown node kind '" + std::string(t[2]) + "'");
          d.kind = *kind;
          d.buffer_capacity = lp.number<int>("buffer_capacity", t[3]);
          if (t.size() == 6) d.position = Position{lp.number<double>("x", t[4]), lp.number<double>("y", t[5])};
          cfg.topology.nodes.push_back(d);
        } else if (t[0] == "link") {
          if (t.size() != 4) lp.fail("link", "expected: link <a> <b> <latency>");
          cfg.topology.links.push_back({lp.node("link", t[1]), lp.node("link", t[2]), lp.number<double>("latency", t[3])});
        } else {
          lp.fail(t[0], "unknown field");
        }
        break;
      }

      case Section::params: {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) lp.fail(line, "expected key = value");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        const auto* field = find_param(key);
        if (!field) lp.fail(key, "unknown field");
        if (!field->set(cfg.params, value)) lp.fail(key, "invalid value '" + std::string(value) + "'");
        break;
      }

      case Section::legit: {
        const auto t = detail::split_ws(line);
        if (t[0] != "flow") lp.fail(t[0], "unknown field");
        TrafficSourceSpec s;
        bool have_src = false, have_dst = false, have_rate = false;
        for (auto [k, v] : detail::key_values(lp, t)) {
          if (k == "src") s.src = lp.node(k, v), have_src = true;
          else if (k == "dst") s.dst = lp.node(k, v), have_dst = true;
          else if (k == "model") {
            if (v == "cbr") s.model = TrafficModel::cbr;
            else if (v == "poisson") s.model = TrafficModel::poisson;
            else lp.fail(k, "expected cbr or poisson");
          } else if (k == "rate") s.rate = lp.number<double>(k, v), have_rate = true;
          else if (k == "payload") s.payload = lp.number<int>(k, v);
          else if (k == "start") s.start = lp.number<double>(k, v);
          else if (k == "stop") s.stop = lp.number<double>(k, v);
          else lp.fail(k, "unknown field");
        }
        if (!have_src) lp.fail("src", "missing");
        if (!have_dst) lp.fail("dst", "missing");
        if (!have_rate) lp.fail("rate", "missing");
        cfg.legit.push_back(s);
        break;
      }

      case Section::attack: {
        const auto t = detail::split_ws(line);
        if (t[0] != "attack") lp.fail(t[0], "unknown field");
        AttackSpec a;
        bool have_victim = false, have_pattern = false, have_start = false;
        for (auto [k, v] : detail::key_values(lp, t)) {
          if (k == "attackers") {
            std::size_t pos = 0;
            while (pos <= v.size()) {
              auto comma = v.find(',', pos);
              if (comma == std::string_view::npos) comma = v.size();
              a.attackers.push_back(lp.node(k, v.substr(pos, comma - pos)));
              pos = comma + 1;
            }
          } else if (k == "victim") a.victim = lp.node(k, v), have_victim = true;
          else if (k == "rate") a.rate = lp.number<double>(k, v);
          else if (k == "pattern") a.pattern = lp.bytes(k, v), have_pattern = true;
          else if (k == "start") a.start = lp.number<double>(k, v), have_start = true;
          else if (k == "stop") a.stop = lp.number<double>(k, v);
          else if (k == "payload") a.payload = lp.number<int>(k, v);
          else if (k == "stealth") a.stealth = lp.boolean(k, v);
          else lp.fail(k, "unknown field");
        }
        if (a.attackers.empty()) lp.fail("attackers", "missing");
        if (!have_victim) lp.fail("victim", "missing");
        if (!have_pattern) lp.fail("pattern", "missing");
        if (!have_start) lp.fail("start", "missing");
        cfg.attacks.push_back(a);
        break;
      }

      case Section::patterns:
        cfg.patterns.push_back(lp.bytes("patterns", line));
        break;
    }
  }

  validate_scenario(cfg);
  return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

inline std::string serialize_scenario(const ScenarioConfig& cfg) {
  using detail::format_number;
  std::ostringstream out;
  out << "[topology]\n";
  for (const auto& n : cfg.topology.nodes) {
    out << "node " << n.id.value << ' ' << to_string(n.kind) << ' ' << n.buffer_capacity;
    if (n.position) out << ' ' << format_number(n.position->x) << ' ' << format_number(n.position->y);
    out << '\n';
  }
  for (const auto& l : cfg.topology.links)
    out << "link " << l.a.value << ' ' << l.b.value << ' ' << format_number(l.latency) << '\n';

  out << "\n[params]\n";
  for (const auto& f : param_fields())
    if (auto v = f.get(cfg.params)) out << f.key << " = " << *v << '\n';

  out << "\n[legit]\n";
  for (const auto& s : cfg.legit) {
    out << "flow src=" << s.src.value << " dst=" << s.dst.value
        << " model=" << (s.model == TrafficModel::cbr ? "cbr" : "poisson") << " rate=" << format_number(s.rate)
        << " payload=" << s.payload << " start=" << format_number(s.start);
    if (s.stop) out << " stop=" << format_number(*s.stop);
    out << '\n';
  }

  out << "\n[attack]\n";
  for (const auto& a : cfg.attacks) {
    out << "attack attackers=";
    for (std::size_t i = 0; i < a.attackers.size(); ++i) out << (i ? "," : "") << a.attackers[i].value;
    out << " victim=" << a.victim.value << " rate=" << format_number(a.rate) << " pattern=" << escape_bytes(a.pattern)
        << " start=" << format_number(a.start);
    if (a.stop) out << " stop=" << format_number(*a.stop);
    out << " payload=" << a.payload << " stealth=" << (a.stealth ? "true" : "false") << '\n';
  }

  out << "\n[patterns]\n";
  for (const auto& p : cfg.patterns) out << escape_bytes(p) << '\n';
  return out.str();
}

}  // namespace antguard
