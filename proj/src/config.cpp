#include "wetting/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wetting/error.hpp"

namespace wetting {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

// Shortest text that parses back to the same double.
std::string shortest(double x) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& text) {
  const std::string s = trim(text);
  double x = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return x;
}

std::uint64_t to_u64(const std::string& text) {
  const std::string s = trim(text);
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("not a non-negative integer: '" + s + "'");
  return x;
}

int to_int(const std::string& text) {
  const std::string s = trim(text);
  int x = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + s + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F fmt) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
  return s;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

// ---------------------------------------------------------------------------
// Call expressions: name | name(arg, key=arg, ...), args numbers or calls.

struct Call;
struct Arg {
  std::string key;
  std::string number;  // raw text when the argument is a number
  std::vector<Call> call;  // 0 or 1 element
};
struct Call {
  std::string name;
  std::vector<Arg> args;
  bool has_parens = false;
};

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  Call parse() {
    Call c = call();
    skip();
    if (i_ != s_.size()) fail("trailing text");
    return c;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(what + " at column " + std::to_string(i_ + 1) + " of '" + s_ + "'");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool ident_char(char c) const { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  std::string ident() {
    skip();
    const std::size_t a = i_;
    while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    if (a == i_) fail("expected a name");
    return s_.substr(a, i_ - a);
  }
  Call call() {
    Call c;
    c.name = ident();
    skip();
    if (i_ < s_.size() && s_[i_] == '(') {
      c.has_parens = true;
      ++i_;
      skip();
      if (i_ < s_.size() && s_[i_] == ')') {
        ++i_;
        return c;
      }
      while (true) {
        c.args.push_back(arg());
        skip();
        if (i_ < s_.size() && s_[i_] == ',') {
          ++i_;
          continue;
        }
        if (i_ < s_.size() && s_[i_] == ')') {
          ++i_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    return c;
  }
  Arg arg() {
    Arg a;
    skip();
    if (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      const std::size_t save = i_;
      const std::string name = ident();
      skip();
      if (i_ < s_.size() && s_[i_] == '=') {
        ++i_;
        a.key = name;
      } else {
        i_ = save;
      }
    }
    skip();
    if (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      // inf / nan are rejected later as non-finite numbers
      const std::size_t save = i_;
      const std::string word = ident();
      if (word == "inf" || word == "nan") {
        a.number = word;
        return a;
      }
      i_ = save;
      a.call.push_back(call());
      return a;
    }
    const std::size_t b = i_;
    while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != ')' && !std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (b == i_) fail("expected a value");
    a.number = s_.substr(b, i_ - b);
    return a;
  }

  std::string s_;
  std::size_t i_ = 0;
};

// Keyword arguments of a call, in the given order, all required and numeric.
std::vector<double> numeric_args(const Call& c, std::initializer_list<const char*> names) {
  require(c.has_parens, c.name + ": expected arguments");
  require(c.args.size() == names.size(), c.name + ": expected " + std::to_string(names.size()) + " arguments");
  std::vector<double> out;
  std::size_t k = 0;
  for (const char* n : names) {
    const Arg& a = c.args[k++];
    require(a.key.empty() || a.key == n, c.name + ": unexpected argument '" + a.key + "'");
    require(a.call.empty(), c.name + ": argument '" + n + "' must be a number");
    out.push_back(to_double(a.number));
  }
  return out;
}

FieldSpec field_from_call(const Call& c) {
  if (c.name == "zero") {
    require(c.args.empty(), "zero takes no arguments");
    return FieldSpec::zero();
  }
  if (c.name == "wall") return FieldSpec::wall_only(numeric_args(c, {"lambda"})[0]);
  if (c.name == "decay") {
    const auto v = numeric_args(c, {"lambda", "delta"});
    return FieldSpec::decay_hat(v[0], v[1]);
  }
  if (c.name == "centered") {
    const auto v = numeric_args(c, {"hstar", "delta"});
    return FieldSpec::centered_decay(v[0], v[1]);
  }
  if (c.name == "layers") {
    require(c.has_parens, "layers: expected arguments");
    std::vector<double> values;
    for (const auto& a : c.args) {
      require(a.key.empty() && a.call.empty(), "layers: arguments must be plain numbers");
      values.push_back(to_double(a.number));
    }
    return FieldSpec::layers(std::move(values));
  }
  if (c.name == "mirrored") {
    require(c.args.size() == 1 && c.args[0].call.size() == 1, "mirrored: expected one field argument");
    return FieldSpec::mirrored(field_from_call(c.args[0].call[0]));
  }
  if (c.name == "sum") {
    std::vector<FieldSpec> terms;
    for (const auto& a : c.args) {
      require(a.key.empty() && a.call.size() == 1, "sum: arguments must be fields");
      terms.push_back(field_from_call(a.call[0]));
    }
    return FieldSpec::sum(std::move(terms));
  }
  throw std::invalid_argument("unknown field '" + c.name + "'");
}

RegionConfig region_from_call(const Call& c) {
  RegionConfig r;
  if (c.name == "semi_box") {
    r.kind = Region::Kind::semi_box;
    const auto v = numeric_args(c, {"n", "m"});
    r.n = static_cast<int>(v[0]);
    r.m = static_cast<int>(v[1]);
    require(v[0] == r.n && v[1] == r.m, "semi_box: n and m must be integers");
  } else if (c.name == "full_box") {
    r.kind = Region::Kind::full_box;
    const auto v = numeric_args(c, {"m", "n"});
    r.m = static_cast<int>(v[0]);
    r.n = static_cast<int>(v[1]);
    require(v[0] == r.m && v[1] == r.n, "full_box: m and n must be integers");
  } else if (c.name == "extended_box") {
    r.kind = Region::Kind::extended_box;
    require(c.args.size() == 2 && c.args[1].call.size() == 1 && !c.args[1].call[0].has_parens,
            "extended_box: expected (n=<int>, reflection=half_plane|negate)");
    require(c.args[0].key.empty() || c.args[0].key == "n", "extended_box: first argument is n");
    require(c.args[1].key.empty() || c.args[1].key == "reflection", "extended_box: second argument is reflection");
    r.n = to_int(c.args[0].number);
    r.m = r.n;
    const std::string refl = c.args[1].call[0].name;
    require(refl == "half_plane" || refl == "negate", "extended_box: unknown reflection '" + refl + "'");
    r.reflection = refl == "negate" ? Reflection::negate : Reflection::half_plane;
  } else {
    throw std::invalid_argument("unknown region '" + c.name + "'");
  }
  require(r.n >= 0 && r.m >= 0, "region sizes must be non-negative");
  if (r.kind == Region::Kind::semi_box) require(r.m >= 1, "semi_box: m must be >= 1");
  return r;
}

std::string render_region(const RegionConfig& r) {
  switch (r.kind) {
    case Region::Kind::semi_box: return "semi_box(n=" + std::to_string(r.n) + ", m=" + std::to_string(r.m) + ")";
    case Region::Kind::full_box: return "full_box(m=" + std::to_string(r.m) + ", n=" + std::to_string(r.n) + ")";
    case Region::Kind::extended_box:
      return "extended_box(n=" + std::to_string(r.n) +
             ", reflection=" + (r.reflection == Reflection::negate ? "negate" : "half_plane") + ")";
    case Region::Kind::explicit_sites: break;
  }
  throw std::invalid_argument("explicit regions have no config form");
}

BoundaryCondition::Kind bc_from_text(const std::string& s) {
  if (s == "plus") return BoundaryCondition::Kind::plus;
  if (s == "minus") return BoundaryCondition::Kind::minus;
  if (s == "minus_plus" || s == "minusplus") return BoundaryCondition::Kind::minus_plus;
  if (s == "free") return BoundaryCondition::Kind::free;
  throw std::invalid_argument("unknown boundary condition '" + s + "' (plus, minus, minusplus, free)");
}

std::string one_of(const std::string& value, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (value == a) return value;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw std::invalid_argument("'" + value + "' is not one of: " + list);
}

void finite_positive(double x, const char* what) {
  require(std::isfinite(x) && x > 0.0, std::string(what) + " must be finite and > 0");
}

// ---------------------------------------------------------------------------
// Key table shared by the parser and the renderer.

struct KeyDef {
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

std::vector<double> double_list(const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(s));
  return out;
}

const std::vector<KeyDef>& keys() {
  static const std::vector<KeyDef> table = {
      {"command", [](auto& c, const auto& v) { c.command = v; }, [](const auto& c) { return c.command; }},
      {"model.d",
       [](auto& c, const auto& v) {
         c.model.d = to_int(v);
         require(c.model.d >= 2 && c.model.d <= kMaxDim, "d must be in [2, " + std::to_string(kMaxDim) + "]");
       },
       [](const auto& c) { return std::to_string(c.model.d); }},
      {"model.region", [](auto& c, const auto& v) { c.model.region = region_from_call(ExprParser(v).parse()); },
       [](const auto& c) { return render_region(c.model.region); }},
      {"model.bc", [](auto& c, const auto& v) { c.model.bc = bc_from_text(v); },
       [](const auto& c) { return to_string(c.model.bc); }},
      {"model.coupling", [](auto& c, const auto& v) { c.model.coupling = parse_coupling(v); },
       [](const auto& c) { return render_coupling(c.model.coupling); }},
      {"model.field", [](auto& c, const auto& v) { c.model.field = parse_field(v); },
       [](const auto& c) { return render_field(c.model.field); }},
      {"model.beta",
       [](auto& c, const auto& v) {
         c.model.beta = to_double(v);
         finite_positive(c.model.beta, "beta");
       },
       [](const auto& c) { return shortest(c.model.beta); }},
      {"run.sweeps",
       [](auto& c, const auto& v) {
         c.run.sweeps = to_u64(v);
         require(c.run.sweeps >= 1, "sweeps must be >= 1");
       },
       [](const auto& c) { return std::to_string(c.run.sweeps); }},
      {"run.burn_in", [](auto& c, const auto& v) { c.run.burn_in = to_u64(v); },
       [](const auto& c) { return std::to_string(c.run.burn_in); }},
      {"run.thin",
       [](auto& c, const auto& v) {
         c.run.thin = to_u64(v);
         require(c.run.thin >= 1, "thin must be >= 1");
       },
       [](const auto& c) { return std::to_string(c.run.thin); }},
      {"run.seed", [](auto& c, const auto& v) { c.run.seed = to_u64(v); },
       [](const auto& c) { return std::to_string(c.run.seed); }},
      {"run.chains",
       [](auto& c, const auto& v) {
         c.run.chains = to_int(v);
         require(c.run.chains >= 1, "chains must be >= 1");
       },
       [](const auto& c) { return std::to_string(c.run.chains); }},
      {"run.update", [](auto& c, const auto& v) { c.run.update = one_of(v, {"heat_bath", "metropolis"}); },
       [](const auto& c) { return c.run.update; }},
      {"run.order", [](auto& c, const auto& v) { c.run.order = one_of(v, {"raster", "checkerboard", "random"}); },
       [](const auto& c) { return c.run.order; }},
      {"output.dir",
       [](auto& c, const auto& v) {
         require(!v.empty(), "output directory must not be empty");
         c.output.dir = v;
       },
       [](const auto& c) { return c.output.dir; }},
      {"output.formats",
       [](auto& c, const auto& v) {
         c.output.formats.clear();
         for (const auto& f : split_list(v)) c.output.formats.push_back(one_of(f, {"csv", "pgm"}));
       },
       [](const auto& c) { return join(c.output.formats, [](const std::string& s) { return s; }); }},
      {"tolerance.oracle",
       [](auto& c, const auto& v) {
         c.tolerance.oracle = to_double(v);
         finite_positive(c.tolerance.oracle, "tolerance");
       },
       [](const auto& c) { return shortest(c.tolerance.oracle); }},
      {"tolerance.slack",
       [](auto& c, const auto& v) {
         c.tolerance.slack = to_double(v);
         finite_positive(c.tolerance.slack, "slack");
       },
       [](const auto& c) { return shortest(c.tolerance.slack); }},
      {"tolerance.sigmas",
       [](auto& c, const auto& v) {
         c.tolerance.sigmas = to_double(v);
         finite_positive(c.tolerance.sigmas, "sigmas");
       },
       [](const auto& c) { return shortest(c.tolerance.sigmas); }},
      {"scan.delta",
       [](auto& c, const auto& v) {
         c.scan.delta = to_double(v);
         finite_positive(c.scan.delta, "delta");
       },
       [](const auto& c) { return shortest(c.scan.delta); }},
      {"scan.lambda_max",
       [](auto& c, const auto& v) {
         c.scan.lambda_max = to_double(v);
         require(std::isfinite(c.scan.lambda_max) && c.scan.lambda_max >= 0.0, "lambda_max must be >= 0");
       },
       [](const auto& c) { return shortest(c.scan.lambda_max); }},
      {"scan.lambda_step",
       [](auto& c, const auto& v) {
         c.scan.lambda_step = to_double(v);
         finite_positive(c.scan.lambda_step, "lambda_step");
       },
       [](const auto& c) { return shortest(c.scan.lambda_step); }},
      {"scan.grid",
       [](auto& c, const auto& v) {
         c.scan.grid = double_list(v);
         if (c.scan.grid.empty()) return;
         require(c.scan.grid.front() == 0.0, "grid must start at 0");
         for (std::size_t k = 0; k < c.scan.grid.size(); ++k)
           require(std::isfinite(c.scan.grid[k]) && (k == 0 || c.scan.grid[k] > c.scan.grid[k - 1]),
                   "grid must be finite and strictly increasing");
       },
       [](const auto& c) { return join(c.scan.grid, shortest); }},
      {"scan.ladder",
       [](auto& c, const auto& v) {
         c.scan.ladder.clear();
         for (const auto& s : split_list(v)) {
           c.scan.ladder.push_back(to_int(s));
           require(c.scan.ladder.back() >= 1, "ladder sizes must be >= 1");
         }
         require(!c.scan.ladder.empty(), "ladder must not be empty");
       },
       [](const auto& c) { return join(c.scan.ladder, [](int n) { return std::to_string(n); }); }},
      {"scan.depth",
       [](auto& c, const auto& v) {
         c.scan.depth = to_int(v);
         require(c.scan.depth >= 0, "depth must be >= 0");
       },
       [](const auto& c) { return std::to_string(c.scan.depth); }},
      {"scan.epsilon",
       [](auto& c, const auto& v) {
         c.scan.epsilon = to_double(v);
         finite_positive(c.scan.epsilon, "epsilon");
       },
       [](const auto& c) { return shortest(c.scan.epsilon); }},
      {"scan.path", [](auto& c, const auto& v) { c.scan.path = one_of(v, {"decay", "wall"}); },
       [](const auto& c) { return c.scan.path; }},
      {"scan.estimator", [](auto& c, const auto& v) { c.scan.estimator = one_of(v, {"exact", "mc"}); },
       [](const auto& c) { return c.scan.estimator; }},
      {"scan.observable",
       [](auto& c, const auto& v) { c.scan.observable = one_of(v, {"central_column", "layer_average"}); },
       [](const auto& c) { return c.scan.observable; }},
      {"scan.gauss",
       [](auto& c, const auto& v) {
         c.scan.gauss = to_int(v);
         require(c.scan.gauss >= 1 && c.scan.gauss <= 128, "gauss must be in [1, 128]");
       },
       [](const auto& c) { return std::to_string(c.scan.gauss); }},
      {"figures.lambda_high",
       [](auto& c, const auto& v) {
         c.figures.lambda_high = to_double(v);
         require(std::isfinite(c.figures.lambda_high), "lambda must be finite");
       },
       [](const auto& c) { return shortest(c.figures.lambda_high); }},
      {"figures.lambda_low",
       [](auto& c, const auto& v) {
         c.figures.lambda_low = to_double(v);
         require(std::isfinite(c.figures.lambda_low), "lambda must be finite");
       },
       [](const auto& c) { return shortest(c.figures.lambda_low); }},
  };
  return table;
}

void validate_coupling(const CouplingSpec& c) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        require(std::isfinite(s.J) && s.J >= 0.0, "coupling J must be finite and >= 0");
        if constexpr (std::is_same_v<T, CouplingSpec::LayerWeakened>)
          require(std::isfinite(s.lambda) && s.lambda >= 0.0, "coupling lambda must be finite and >= 0");
      },
      c.variant());
}

}  // namespace

std::string render_field(const FieldSpec& field) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FieldSpec::Zero>) return "zero";
        else if constexpr (std::is_same_v<T, FieldSpec::WallOnly>) return "wall(lambda=" + shortest(s.lambda) + ")";
        else if constexpr (std::is_same_v<T, FieldSpec::DecayHat>)
          return "decay(lambda=" + shortest(s.lambda) + ", delta=" + shortest(s.delta) + ")";
        else if constexpr (std::is_same_v<T, FieldSpec::CenteredDecay>)
          return "centered(hstar=" + shortest(s.hstar) + ", delta=" + shortest(s.delta) + ")";
        else if constexpr (std::is_same_v<T, FieldSpec::LayerSequence>)
          return "layers(" + join(s.values, shortest) + ")";
        else if constexpr (std::is_same_v<T, FieldSpec::Mirrored>)
          return "mirrored(" + render_field(*s.base) + ")";
        else
          return "sum(" + join(s.terms, [](const FieldSpec& f) { return render_field(f); }) + ")";
      },
      field.variant());
}

FieldSpec parse_field(const std::string& text) {
  FieldSpec f = field_from_call(ExprParser(text).parse());
  validate(f);
  return f;
}

std::string render_coupling(const CouplingSpec& coupling) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CouplingSpec::Uniform>) return "uniform(J=" + shortest(s.J) + ")";
        else return "layer_weakened(J=" + shortest(s.J) + ", lambda=" + shortest(s.lambda) + ")";
      },
      coupling.variant());
}

CouplingSpec parse_coupling(const std::string& text) {
  const Call c = ExprParser(text).parse();
  CouplingSpec out;
  if (c.name == "uniform") out = CouplingSpec::uniform(numeric_args(c, {"J"})[0]);
  else if (c.name == "layer_weakened") {
    const auto v = numeric_args(c, {"J", "lambda"});
    out = CouplingSpec::layer_weakened(v[0], v[1]);
  } else {
    throw std::invalid_argument("unknown coupling '" + c.name + "' (uniform, layer_weakened)");
  }
  validate_coupling(out);
  return out;
}

ModelInstance ExperimentConfig::instance() const {
  Region region = Region::semi_box(model.d, model.region.n, model.region.m);
  if (model.region.kind == Region::Kind::full_box) region = Region::full_box(model.d, model.region.m, model.region.n);
  if (model.region.kind == Region::Kind::extended_box)
    region = Region::extended_box(model.d, model.region.n, model.region.reflection);
  BoundaryCondition bc = BoundaryCondition::plus();
  switch (model.bc) {
    case BoundaryCondition::Kind::minus: bc = BoundaryCondition::minus(); break;
    case BoundaryCondition::Kind::minus_plus: bc = BoundaryCondition::minus_plus(); break;
    case BoundaryCondition::Kind::free: bc = BoundaryCondition::free(); break;
    default: break;
  }
  return ModelInstance::make(std::move(region), std::move(bc), model.coupling, model.field, model.beta);
}

std::vector<double> ExperimentConfig::lambda_grid() const {
  if (!scan.grid.empty()) return scan.grid;
  std::vector<double> g;
  const auto count = static_cast<std::size_t>(std::floor(scan.lambda_max / scan.lambda_step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) g.push_back(static_cast<double>(k) * scan.lambda_step);
  if (g.back() < scan.lambda_max - 1e-12) g.push_back(scan.lambda_max);
  return g;
}

void validate_config(const ExperimentConfig& c, int line) {
  if (c.run.burn_in >= c.run.sweeps)
    throw ConfigError(line, "run.burn_in", "burn_in must be smaller than sweeps");
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::map<std::string, const KeyDef*> index;
  for (const auto& k : keys()) index[k.name] = &k;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  int last = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError(line, key, "unknown key");
    try {
      it->second->set(base, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(line, key, e.what());
    }
    last = line;
  }
  validate_config(base, last);
  return base;
}

std::string render_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& k : keys()) out += std::string(k.name) + " = " + k.get(config) + "\n";
  return out;
}

std::vector<std::string> preset_names() { return {"default", "tiny", "figures", "lambda-c"}; }

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "default") return c;
  if (name == "tiny") {
    c.model.region = {Region::Kind::semi_box, 1, 2, Reflection::half_plane};
    c.model.coupling = CouplingSpec::uniform(0.5);
    c.model.field = FieldSpec::decay_hat(0.4, 2.0);
    c.run.sweeps = 2000;
    c.run.burn_in = 200;
    c.scan.ladder = {1, 2};
    c.scan.depth = 1;
    c.scan.lambda_max = 0.5;
    c.scan.lambda_step = 0.25;
    return c;
  }
  if (name == "figures") {
    c.model.region = {Region::Kind::semi_box, 64, 64, Reflection::half_plane};
    c.model.bc = BoundaryCondition::Kind::minus;
    c.model.coupling = CouplingSpec::uniform(1.0);
    c.model.beta = 0.5;
    c.run.sweeps = 20000;
    c.run.burn_in = 5000;
    return c;
  }
  if (name == "lambda-c") {
    c.model.region = {Region::Kind::semi_box, 16, 16, Reflection::half_plane};
    c.model.coupling = CouplingSpec::uniform(1.0);
    c.model.beta = 0.5;
    c.run.sweeps = 20000;
    c.run.burn_in = 2000;
    c.scan.delta = 2.0;
    c.scan.estimator = "mc";
    c.scan.ladder = {16, 32, 64};
    c.scan.depth = 4;
    c.scan.grid.clear();
    for (int k = 0; k <= 10; ++k) c.scan.grid.push_back(0.1 * k);
    for (int k = 5; k <= 16; ++k) c.scan.grid.push_back(0.25 * k);
    return c;
  }
  throw ConfigError(0, "preset", "unknown preset '" + name + "'");
}

}  // namespace wetting
