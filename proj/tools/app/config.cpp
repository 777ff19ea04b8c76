#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace finsler::app {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

using Section = std::multimap<std::string, Entry, std::less<>>;

const std::map<std::string, std::set<std::string, std::less<>>, std::less<>>& known_keys() {
  static const std::map<std::string, std::set<std::string, std::less<>>, std::less<>> keys{
      {"space", {"family", "exponent", "a", "b", "b_potential"}},
      {"constants", {}},
      {"hypersurface", {"potential", "level"}},
      {"tensors", {"flag"}},
      {"audit", {"flags", "seed", "fd_step", "richardson"}},
      {"classify", {"points", "directions", "seed", "tol", "box"}},
      {"geodesic", {"from", "to", "segments", "max_iter", "tol", "seed", "perturbation"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(std::size_t line, const std::string& what) const { throw ConfigError(origin_, line, what); }

  double number(const Entry& e) const {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || e.value.empty()) fail(e.line, "expected a number, got '" + e.value + "'");
    return v;
  }

  std::uint64_t unsigned_integer(const Entry& e) const {
    std::uint64_t v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || e.value.empty()) {
      fail(e.line, "expected a non-negative integer, got '" + e.value + "'");
    }
    return v;
  }

  bool boolean(const Entry& e) const {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail(e.line, "expected true or false, got '" + e.value + "'");
  }

  Vector point(const std::string& text, std::size_t line) const {
    const auto parts = split(text, ',');
    Vector v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = number({parts[i], line});
    return v;
  }

  Expr expression(const std::string& text, std::size_t line, const ConstantTable& constants) const {
    try {
      return parse(text, constants);
    } catch (const ParseError& e) {
      fail(line, std::string("in expression '") + text + "': " + e.what());
    }
  }

 private:
  std::string origin_;
};

const Entry* single(const Reader& r, const Section& s, std::string_view key) {
  const auto [lo, hi] = s.equal_range(key);
  if (lo == hi) return nullptr;
  if (std::next(lo) != hi) r.fail(std::next(lo)->second.line, "duplicate key '" + std::string(key) + "'");
  return &lo->second;
}

std::map<std::string, Section, std::less<>> read_sections(const Reader& r, const std::string& text) {
  std::map<std::string, Section, std::less<>> sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') r.fail(line, "malformed section header '" + s + "'");
      current = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!known_keys().contains(current)) r.fail(line, "unknown section [" + current + "]");
      if (sections.contains(current)) r.fail(line, "duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) r.fail(line, "expected key = value");
    if (current.empty()) r.fail(line, "key outside of any section");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) r.fail(line, "empty key");
    const auto& allowed = known_keys().at(current);
    if (current != "constants" && !allowed.contains(key)) {
      r.fail(line, "unknown key '" + key + "' in [" + current + "]");
    }
    sections[current].emplace(key, Entry{value, line});
  }
  return sections;
}

void parse_constants(const Reader& r, const Section& s, RunConfig& cfg) {
  for (const auto& [key, e] : s) {
    if (cfg.constants.contains(key)) r.fail(e.line, "duplicate constant '" + key + "'");
    const bool identifier = !key.empty() && std::isalpha(static_cast<unsigned char>(key.front())) &&
                            std::all_of(key.begin(), key.end(), [](char c) {
                              return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                            });
    if (!identifier) r.fail(e.line, "invalid constant name '" + key + "'");
    cfg.constants[key] = r.number(e);
  }
}

void parse_space(const Reader& r, const Section& s, RunConfig& cfg) {
  Family family = Family::GeneralizedSquare;
  if (const Entry* e = single(r, s, "family")) {
    try {
      family = parse_family(e->value);
    } catch (const Error& err) {
      r.fail(e->line, err.what());
    }
  }
  int exponent = 1;
  std::size_t exponent_line = 0;
  if (const Entry* e = single(r, s, "exponent")) {
    const double k = r.number(*e);
    if (k != std::floor(k) || k < 1) r.fail(e->line, "exponent k must be an integer >= 1, got " + e->value);
    exponent = static_cast<int>(k);
    exponent_line = e->line;
  }
  const Entry* a = single(r, s, "a");
  if (!a) r.fail(1, "[space] requires an 'a' matrix block");
  const auto rows = split(a->value, ';');
  const std::size_t dim = rows.size();
  std::vector<Expr> a_entries;
  for (const auto& row : rows) {
    const auto cols = split(row, ',');
    if (cols.size() != dim) {
      r.fail(a->line, "a-matrix block is " + std::to_string(dim) + "x" + std::to_string(cols.size()) +
                          ", dimension mismatch (expected a square block)");
    }
    for (const auto& c : cols) a_entries.push_back(r.expression(c, a->line, cfg.constants));
  }

  const Entry* b = single(r, s, "b");
  const Entry* potential = single(r, s, "b_potential");
  if ((b != nullptr) == (potential != nullptr)) {
    r.fail(b ? b->line : (potential ? potential->line : a->line), "[space] needs exactly one of 'b' or 'b_potential'");
  }
  try {
    if (potential) {
      cfg.space = SpaceSpec::from_potential(dim, exponent, family, std::move(a_entries),
                                            r.expression(potential->value, potential->line, cfg.constants));
    } else {
      const auto parts = split(b->value, ',');
      if (parts.size() != dim) {
        r.fail(b->line, "b has " + std::to_string(parts.size()) + " components, dimension mismatch (expected " +
                            std::to_string(dim) + ")");
      }
      std::vector<Expr> b_entries;
      for (const auto& p : parts) b_entries.push_back(r.expression(p, b->line, cfg.constants));
      cfg.space = SpaceSpec(dim, exponent, family, std::move(a_entries), std::move(b_entries));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& err) {
    r.fail(exponent_line ? exponent_line : a->line, err.what());
  }
}

void parse_hypersurface(const Reader& r, const Section& s, RunConfig& cfg) {
  const Entry* level = single(r, s, "level");
  const Entry* potential = single(r, s, "potential");
  if (!level) r.fail(potential ? potential->line : 1, "[hypersurface] requires 'level'");
  Expr phi;
  if (potential) {
    phi = r.expression(potential->value, potential->line, cfg.constants);
  } else if (cfg.space->potential()) {
    phi = *cfg.space->potential();
  } else {
    r.fail(level->line, "[hypersurface] needs 'potential' when [space] gives b by components");
  }
  if (phi.dimension() > cfg.space->dim()) r.fail(level->line, "hypersurface potential exceeds the space dimension");
  cfg.surface = LevelSurface(phi, r.number(*level), cfg.space->dim());
}

void parse_tensors(const Reader& r, const Section& s, RunConfig& cfg) {
  const auto [lo, hi] = s.equal_range("flag");
  for (auto it = lo; it != hi; ++it) {
    const Entry& e = it->second;
    const auto parts = split(e.value, ';');
    if (parts.size() != 2) r.fail(e.line, "flag must be written 'x ; y'");
    FlagInput f{r.point(parts[0], e.line), r.point(parts[1], e.line), e.line};
    const auto d = static_cast<Eigen::Index>(cfg.space->dim());
    if (f.x.size() != d || f.y.size() != d) r.fail(e.line, "flag dimension mismatch");
    cfg.flags.push_back(std::move(f));
  }
  std::sort(cfg.flags.begin(), cfg.flags.end(), [](const FlagInput& a, const FlagInput& b) { return a.line < b.line; });
}

void parse_audit(const Reader& r, const Section& s, RunConfig& cfg) {
  if (const Entry* e = single(r, s, "flags")) {
    cfg.audit_flags = r.unsigned_integer(*e);
    if (cfg.audit_flags == 0) r.fail(e->line, "flags must be positive");
  }
  if (const Entry* e = single(r, s, "seed")) cfg.audit_seed = r.unsigned_integer(*e);
  if (const Entry* e = single(r, s, "fd_step")) {
    cfg.audit.fd.step = r.number(*e);
    if (!(cfg.audit.fd.step > 0)) r.fail(e->line, "fd_step must be positive");
  }
  if (const Entry* e = single(r, s, "richardson")) cfg.audit.fd.richardson = r.boolean(*e);
}

void parse_classify(const Reader& r, const Section& s, RunConfig& cfg) {
  if (const Entry* e = single(r, s, "points")) {
    cfg.classify.points = r.unsigned_integer(*e);
    if (cfg.classify.points == 0) r.fail(e->line, "points must be positive");
  }
  if (const Entry* e = single(r, s, "directions")) {
    cfg.classify.directions = r.unsigned_integer(*e);
    if (cfg.classify.directions == 0) r.fail(e->line, "directions must be positive");
  }
  if (const Entry* e = single(r, s, "seed")) cfg.classify.seed = r.unsigned_integer(*e);
  if (const Entry* e = single(r, s, "tol")) cfg.classify.tol = r.number(*e);
  if (const Entry* e = single(r, s, "box")) cfg.classify.box = r.number(*e);
}

void parse_geodesic(const Reader& r, const Section& s, RunConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(cfg.space->dim());
  if (const Entry* e = single(r, s, "from")) {
    cfg.from = r.point(e->value, e->line);
    if (cfg.from->size() != d) r.fail(e->line, "geodesic endpoint dimension mismatch");
  }
  if (const Entry* e = single(r, s, "to")) {
    cfg.to = r.point(e->value, e->line);
    if (cfg.to->size() != d) r.fail(e->line, "geodesic endpoint dimension mismatch");
  }
  if (const Entry* e = single(r, s, "segments")) {
    cfg.geodesic.segments = r.unsigned_integer(*e);
    if (cfg.geodesic.segments == 0) r.fail(e->line, "segments must be positive");
  }
  if (const Entry* e = single(r, s, "max_iter")) cfg.geodesic.max_iter = r.unsigned_integer(*e);
  if (const Entry* e = single(r, s, "tol")) cfg.geodesic.tol = r.number(*e);
  if (const Entry* e = single(r, s, "seed")) cfg.geodesic.seed = r.unsigned_integer(*e);
  if (const Entry* e = single(r, s, "perturbation")) cfg.geodesic.perturbation = r.number(*e);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  const Reader r(origin);
  const auto sections = read_sections(r, text);
  RunConfig cfg;
  auto section = [&](std::string_view name) -> const Section* {
    const auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  };
  if (const Section* s = section("constants")) parse_constants(r, *s, cfg);
  const Section* space = section("space");
  if (!space) r.fail(1, "missing [space] section");
  parse_space(r, *space, cfg);
  if (const Section* s = section("hypersurface")) parse_hypersurface(r, *s, cfg);
  if (const Section* s = section("tensors")) parse_tensors(r, *s, cfg);
  if (const Section* s = section("audit")) parse_audit(r, *s, cfg);
  if (const Section* s = section("classify")) parse_classify(r, *s, cfg);
  if (const Section* s = section("geodesic")) parse_geodesic(r, *s, cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

void apply_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.audit_seed = seed;
  cfg.classify.seed = seed;
  cfg.geodesic.seed = seed;
}

}  // namespace finsler::app
