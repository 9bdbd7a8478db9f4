#include "followme/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "followme/errors.hpp"

namespace followme {
namespace {

struct Value
{
  enum class Kind { Number, Bool, String, Array };
  Kind kind{Kind::Number};
  std::string text;  // number literal or string contents
  bool flag{false};
  std::vector<Value> items;
};

struct Entry
{
  Value value;
  int line{0};
};

using Table = std::map<std::string, Entry>;

class ValueParser
{
public:
  ValueParser(std::string_view text, int line) : text_(text), line_(line) {}

  Value parse_all()
  {
    Value v = parse_value();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected trailing characters '" + std::string(text_.substr(pos_)) + "'");
    }
    return v;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  void skip_ws()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Value parse_value()
  {
    skip_ws();
    if (pos_ >= text_.size()) fail("missing value");
    const char c = text_[pos_];
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return Value{Value::Kind::Bool, {}, true, {}};
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return Value{Value::Kind::Bool, {}, false, {}};
    }
    return parse_number();
  }

  Value parse_array()
  {
    Value v{Value::Kind::Array, {}, false, {}};
    ++pos_;  // '['
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(parse_value());
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ']') {  // trailing comma
          ++pos_;
          return v;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in array");
    }
  }

  Value parse_string()
  {
    ++pos_;
    const auto end = text_.find('"', pos_);
    if (end == std::string_view::npos) fail("unterminated string");
    Value v{Value::Kind::String, std::string(text_.substr(pos_, end - pos_)), false, {}};
    pos_ = end + 1;
    return v;
  }

  Value parse_number()
  {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.' ||
          c == 'e' || c == 'E' || c == '_') {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("invalid value near '" + std::string(text_.substr(start)) + "'");
    std::string literal(text_.substr(start, pos_ - start));
    std::erase(literal, '_');
    return Value{Value::Kind::Number, literal, false, {}};
  }

  std::string_view text_;
  int line_;
  std::size_t pos_{0};
};

std::string strip_comment(const std::string& line)
{
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

int bracket_balance(const std::string& s)
{
  int depth = 0;
  bool in_string = false;
  for (char c : s) {
    if (c == '"') in_string = !in_string;
    if (in_string) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

struct Document
{
  Table root;
  std::vector<std::pair<int, Table>> script;  // line of the [[user_script]] header, entries
};

Document parse_document(std::string_view text)
{
  Document doc;
  std::string section;
  Table* current = &doc.root;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.rfind("[[", 0) == 0) {
      if (line.size() < 4 || line.substr(line.size() - 2) != "]]") {
        throw ParseError(line_no, "malformed table-array header");
      }
      const std::string name = trim(line.substr(2, line.size() - 4));
      if (name != "user_script") {
        throw ParseError(line_no, "unknown table array '" + name + "'");
      }
      doc.script.emplace_back(line_no, Table{});
      current = &doc.script.back().second;
      section.clear();
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError(line_no, "empty section name");
      current = &doc.root;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "missing key");
    std::string value_text = line.substr(eq + 1);
    const int start_line = line_no;
    while (bracket_balance(value_text) > 0) {
      if (!std::getline(in, raw)) throw ParseError(start_line, "unterminated array for '" + key + "'");
      ++line_no;
      value_text += " " + trim(strip_comment(raw));
    }

    const std::string full_key =
        (current == &doc.root && !section.empty()) ? section + "." + key : key;
    Value value = ValueParser(value_text, start_line).parse_all();
    if (!current->emplace(full_key, Entry{std::move(value), start_line}).second) {
      throw ParseError(start_line, "duplicate key '" + full_key + "'");
    }
  }
  return doc;
}

// Pulls typed values out of a table, erasing each key it consumes so that
// leftovers can be reported as unknown.
class Reader
{
public:
  explicit Reader(Table& table) : table_(table) {}

  template <typename Setter>
  void take(const std::string& key, Setter&& set)
  {
    const auto it = table_.find(key);
    if (it == table_.end()) return;
    line_ = it->second.line;
    key_ = key;
    set(it->second.value);
    table_.erase(it);
  }

  double number(const Value& v) const
  {
    expect(v, Value::Kind::Number);
    double out = 0.0;
    const auto* b = v.text.data();
    const auto* e = b + v.text.size();
    const auto* p = (b != e && *b == '+') ? b + 1 : b;
    const auto res = std::from_chars(p, e, out);
    if (res.ec != std::errc{} || res.ptr != e) fail("invalid number '" + v.text + "'");
    return out;
  }

  template <typename Int>
  Int integer(const Value& v) const
  {
    expect(v, Value::Kind::Number);
    Int out{};
    const auto* b = v.text.data();
    const auto* e = b + v.text.size();
    const auto res = std::from_chars(b, e, out);
    if (res.ec != std::errc{} || res.ptr != e) fail("expected an integer, got '" + v.text + "'");
    return out;
  }

  bool boolean(const Value& v) const
  {
    expect(v, Value::Kind::Bool);
    return v.flag;
  }

  std::string string(const Value& v) const
  {
    expect(v, Value::Kind::String);
    return v.text;
  }

  Point2 point(const Value& v) const
  {
    expect(v, Value::Kind::Array);
    if (v.items.size() != 2) fail("expected [x, y]");
    return Point2(number(v.items[0]), number(v.items[1]));
  }

  std::vector<Point2> points(const Value& v) const
  {
    expect(v, Value::Kind::Array);
    std::vector<Point2> out;
    for (const auto& item : v.items) out.push_back(point(item));
    return out;
  }

  void reject_leftovers() const
  {
    if (!table_.empty()) {
      const auto& [key, entry] = *table_.begin();
      throw ParseError(entry.line, "unknown key '" + key + "'");
    }
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, key_ + ": " + msg); }

  void expect(const Value& v, Value::Kind kind) const
  {
    if (v.kind != kind) {
      static constexpr const char* names[] = {"number", "boolean", "string", "array"};
      fail(std::string("expected a ") + names[static_cast<int>(kind)]);
    }
  }

  Table& table_;
  int line_{0};
  std::string key_;
};

std::string fmt_number(double x)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string fmt_point(const Point2& p)
{
  return "[" + fmt_number(p.x()) + ", " + fmt_number(p.y()) + "]";
}

std::string fmt_points(const std::vector<Point2>& pts)
{
  std::string out = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ", ";
    out += fmt_point(pts[i]);
  }
  return out + "]";
}

std::string_view behavior_name(UserBehaviorKind k)
{
  switch (k) {
    case UserBehaviorKind::FollowAtGap: return "follow";
    case UserBehaviorKind::Hold: return "hold";
    case UserBehaviorKind::LeaveField: return "leave";
  }
  return "hold";
}

}  // namespace

void ScenarioConfig::validate() const
{
  PathPolyline path(path_waypoints);  // throws on degenerate paths
  (void)path;
  if (!user_start.allFinite()) throw ConfigError("user_start", "must be finite");
  for (const auto& b : bystanders) {
    if (!b.allFinite()) throw ConfigError("bystanders", "must be finite");
  }
  if (!(user_speed_max >= 0.0) || !std::isfinite(user_speed_max)) {
    throw ConfigError("user_speed_max", "must be >= 0");
  }
  controller.validate();
  fsm.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("filter.alpha", "must lie in (0, 1]");
  noise.validate();
  detector.validate();
  fov.validate();
  if (!(service_timeout > 0.0) || !std::isfinite(service_timeout)) {
    throw ConfigError("bus.service_timeout", "must be > 0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be > 0");
  if (max_ticks <= 0) throw ConfigError("max_ticks", "must be > 0");
}

Tick ScenarioConfig::service_timeout_ticks() const
{
  return static_cast<Tick>(std::llround(service_timeout / dt));
}

ScenarioConfig load_scenario(std::string_view text)
{
  Document doc = parse_document(text);
  ScenarioConfig cfg;
  Reader r(doc.root);

  std::optional<Point2> user_start;
  r.take("name", [&](const Value& v) { cfg.name = r.string(v); });
  r.take("seed", [&](const Value& v) { cfg.noise.seed = r.integer<std::uint64_t>(v); });
  r.take("dt", [&](const Value& v) { cfg.dt = r.number(v); });
  r.take("max_ticks", [&](const Value& v) { cfg.max_ticks = r.integer<Tick>(v); });
  r.take("user_speed_max", [&](const Value& v) { cfg.user_speed_max = r.number(v); });
  r.take("user_start", [&](const Value& v) { user_start = r.point(v); });
  r.take("user_gestures", [&](const Value& v) { cfg.user_gestures = r.boolean(v); });
  r.take("bystanders", [&](const Value& v) { cfg.bystanders = r.points(v); });

  bool have_path = false;
  r.take("path.waypoints", [&](const Value& v) {
    cfg.path_waypoints = r.points(v);
    have_path = true;
  });

  r.take("controller.d_des", [&](const Value& v) { cfg.controller.d_des = r.number(v); });
  r.take("controller.d_resume", [&](const Value& v) { cfg.controller.d_resume = r.number(v); });
  r.take("controller.v_nom", [&](const Value& v) { cfg.controller.v_nom = r.number(v); });
  r.take("controller.v_max", [&](const Value& v) { cfg.controller.v_max = r.number(v); });

  r.take("fsm.gesture_attempts", [&](const Value& v) { cfg.fsm.gesture_attempts = r.integer<int>(v); });
  r.take("fsm.lost_timeout", [&](const Value& v) { cfg.fsm.lost_timeout = r.number(v); });

  r.take("filter.alpha", [&](const Value& v) { cfg.alpha = r.number(v); });

  r.take("noise.sigma", [&](const Value& v) { cfg.noise.sigma = r.number(v); });
  r.take("noise.dropout_p", [&](const Value& v) { cfg.noise.dropout_p = r.number(v); });
  r.take("noise.outlier_p", [&](const Value& v) { cfg.noise.outlier_p = r.number(v); });
  r.take("noise.outlier_mag", [&](const Value& v) { cfg.noise.outlier_mag = r.number(v); });

  r.take("detector.gesture_true_p", [&](const Value& v) { cfg.detector.gesture_true_p = r.number(v); });
  r.take("detector.gesture_latency", [&](const Value& v) { cfg.detector.gesture_latency = r.integer<Tick>(v); });
  r.take("detector.id_success_p", [&](const Value& v) { cfg.detector.id_success_p = r.number(v); });
  r.take("detector.id_latency", [&](const Value& v) { cfg.detector.id_latency = r.integer<Tick>(v); });

  r.take("fov.half_angle", [&](const Value& v) { cfg.fov.half_angle = r.number(v); });
  r.take("fov.max_range", [&](const Value& v) { cfg.fov.max_range = r.number(v); });

  r.take("bus.service_timeout", [&](const Value& v) { cfg.service_timeout = r.number(v); });
  r.reject_leftovers();

  if (!have_path) {
    throw ParseError(0, "missing required key 'path.waypoints'");
  }

  std::vector<ScriptSegment> segments;
  for (auto& [line, table] : doc.script) {
    Reader sr(table);
    ScriptSegment seg;
    bool have_start = false;
    bool have_end = false;
    std::string behavior = "hold";
    std::optional<double> gap;
    sr.take("start", [&](const Value& v) { seg.start = sr.number(v); have_start = true; });
    sr.take("end", [&](const Value& v) { seg.end = sr.number(v); have_end = true; });
    sr.take("behavior", [&](const Value& v) { behavior = sr.string(v); });
    sr.take("gap", [&](const Value& v) { gap = sr.number(v); });
    sr.reject_leftovers();
    if (!have_start || !have_end) {
      throw ParseError(line, "user_script entry needs 'start' and 'end'");
    }
    if (behavior == "follow") {
      if (!gap) throw ParseError(line, "follow segment needs 'gap'");
      seg.behavior = UserBehavior::follow(*gap);
    } else if (behavior == "hold") {
      seg.behavior = UserBehavior::hold();
    } else if (behavior == "leave") {
      seg.behavior = UserBehavior::leave();
    } else {
      throw ParseError(line, "unknown behavior '" + behavior + "' (follow, hold, leave)");
    }
    segments.push_back(seg);
  }
  cfg.user_script = UserScript(std::move(segments));

  if (user_start) {
    cfg.user_start = *user_start;
  } else {
    const PathPolyline path(cfg.path_waypoints);
    const Pose2D start = path.pose_at(0.0);
    cfg.user_start = start.position - 1.2 * Point2(std::cos(start.theta), std::sin(start.theta));
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string write_scenario(const ScenarioConfig& c)
{
  std::ostringstream o;
  o << "name = \"" << c.name << "\"\n"
    << "seed = " << c.noise.seed << "\n"
    << "dt = " << fmt_number(c.dt) << "\n"
    << "max_ticks = " << c.max_ticks << "\n"
    << "user_speed_max = " << fmt_number(c.user_speed_max) << "\n"
    << "user_start = " << fmt_point(c.user_start) << "\n"
    << "user_gestures = " << (c.user_gestures ? "true" : "false") << "\n"
    << "bystanders = " << fmt_points(c.bystanders) << "\n"
    << "\n[path]\n"
    << "waypoints = " << fmt_points(c.path_waypoints) << "\n"
    << "\n[controller]\n"
    << "d_des = " << fmt_number(c.controller.d_des) << "\n"
    << "d_resume = " << fmt_number(c.controller.d_resume) << "\n"
    << "v_nom = " << fmt_number(c.controller.v_nom) << "\n"
    << "v_max = " << fmt_number(c.controller.v_max) << "\n"
    << "\n[fsm]\n"
    << "gesture_attempts = " << c.fsm.gesture_attempts << "\n"
    << "lost_timeout = " << fmt_number(c.fsm.lost_timeout) << "\n"
    << "\n[filter]\n"
    << "alpha = " << fmt_number(c.alpha) << "\n"
    << "\n[noise]\n"
    << "sigma = " << fmt_number(c.noise.sigma) << "\n"
    << "dropout_p = " << fmt_number(c.noise.dropout_p) << "\n"
    << "outlier_p = " << fmt_number(c.noise.outlier_p) << "\n"
    << "outlier_mag = " << fmt_number(c.noise.outlier_mag) << "\n"
    << "\n[detector]\n"
    << "gesture_true_p = " << fmt_number(c.detector.gesture_true_p) << "\n"
    << "gesture_latency = " << c.detector.gesture_latency << "\n"
    << "id_success_p = " << fmt_number(c.detector.id_success_p) << "\n"
    << "id_latency = " << c.detector.id_latency << "\n"
    << "\n[fov]\n"
    << "half_angle = " << fmt_number(c.fov.half_angle) << "\n"
    << "max_range = " << fmt_number(c.fov.max_range) << "\n"
    << "\n[bus]\n"
    << "service_timeout = " << fmt_number(c.service_timeout) << "\n";
  for (const auto& seg : c.user_script.segments()) {
    o << "\n[[user_script]]\n"
      << "start = " << fmt_number(seg.start) << "\n"
      << "end = " << fmt_number(seg.end) << "\n"
      << "behavior = \"" << behavior_name(seg.behavior.kind) << "\"\n";
    if (seg.behavior.kind == UserBehaviorKind::FollowAtGap) {
      o << "gap = " << fmt_number(seg.behavior.target_gap) << "\n";
    }
  }
  return o.str();
}

}  // namespace followme
