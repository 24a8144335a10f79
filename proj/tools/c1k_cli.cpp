// c1k command-line front end. Talks to the library only through c1k.h.

#include <c1k/c1k.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr int kExitUsage = 64;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Carries an exit code out of a command handler.
struct Failure {
  int code;
  std::string message;
};

struct Globals {
  std::string config_path;
  std::string json_path;
  bool strict = false;
};

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitUsage, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kExitUsage, "cannot write '" + path + "'"};
    out << content;
    out.flush();
    if (!out) throw Failure{kExitUsage, "cannot write '" + path + "'"};
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Failure{kExitUsage, "cannot write '" + path + "'"};
  }
}

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  c1k_string_free(s);
  return out;
}

class Session {
 public:
  explicit Session(const Globals& g) : g_(g) {
    std::string cfg;
    if (!g.config_path.empty()) {
      cfg = read_input(g.config_path);
      add_input(g.config_path, cfg);
    }
    const c1k_status st = c1k_context_new(cfg.empty() ? nullptr : cfg.c_str(), &ctx_);
    if (st != C1K_OK) {
      const std::string msg = c1k_last_error(ctx_);
      c1k_context_free(ctx_);
      ctx_ = nullptr;
      throw Failure{st, "config: " + msg};
    }
  }
  ~Session() { c1k_context_free(ctx_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  c1k_context* ctx() { return ctx_; }

  /// Reads a file and records its hash for the report.
  std::string input(const std::string& path) {
    std::string text = read_input(path);
    add_input(path, text);
    return text;
  }

  /// Status check for calls without a result string.
  void check(c1k_status st) {
    if (st != C1K_OK) throw Failure{st, c1k_last_error(ctx_)};
  }

  /// Takes ownership of the string a call produced; Inconclusive results are kept.
  /// `out` is read after the call expression has been evaluated.
  json call(c1k_status st, char*& out) {
    if (st != C1K_OK && st != C1K_INCONCLUSIVE) {
      c1k_string_free(out);
      out = nullptr;
      throw Failure{st, c1k_last_error(ctx_)};
    }
    inconclusive_ = inconclusive_ || st == C1K_INCONCLUSIVE;
    char* taken = out;
    out = nullptr;
    return json::parse(take(taken));
  }

  int finish(const std::string& command, const json& result) {
    char* out = nullptr;
    const std::string res = result.dump();
    const std::string ins = inputs_.dump();
    check(c1k_report(ctx_, command.c_str(), ins.c_str(), res.c_str(), &out));
    const std::string report = take(out);
    if (g_.json_path.empty())
      std::cout << report;
    else
      write_atomic(g_.json_path, report);
    return inconclusive_ && g_.strict ? 3 : 0;
  }

 private:
  void add_input(const std::string& name, const std::string& text) {
    char* h = nullptr;
    if (c1k_fnv1a64(text.data(), text.size(), &h) != C1K_OK) throw Failure{70, "hash failed"};
    inputs_.push_back({name, take(h)});
  }

  const Globals& g_;
  c1k_context* ctx_ = nullptr;
  json inputs_ = json::array();
  bool inconclusive_ = false;
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
};
using SetHandle = Handle<c1k_set, c1k_set_free>;
using JetHandle = Handle<c1k_jet, c1k_jet_free>;
using ChargeHandle = Handle<c1k_charge, c1k_charge_free>;

void load_set(Session& s, const std::string& path, SetHandle& h) {
  const std::string text = s.input(path);
  s.check(c1k_set_from_json(s.ctx(), text.c_str(), &h.p));
}

std::string params_json(const std::vector<std::string>& kv) {
  json p = json::object();
  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Failure{kExitUsage, "parameter '" + item + "' is not key=value"};
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      p[key] = v;
    } catch (const std::logic_error&) {
      throw Failure{kExitUsage, "parameter '" + key + "' needs a numeric value"};
    }
  }
  return p.dump();
}

double coord(const std::vector<double>& v, std::size_t i) {
  return v.size() == 2 ? v[i] : kNaN;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Whitney-regularity and C1 restriction toolkit", "c1k"};
  app.set_version_flag("--version", std::string(c1k_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "Run configuration (JSON)");
  app.add_flag("--strict", g.strict, "Exit 3 when a verdict is Inconclusive");
  app.add_option("--json", g.json_path, "Write the report here instead of stdout");

  std::function<int()> action;
  auto bind = [&](CLI::App* cmd, std::function<int()> fn) {
    cmd->callback([&action, fn] { action = fn; });
  };
  auto point_opt = [](CLI::App* cmd, const char* name, std::vector<double>& v, const char* help) {
    return cmd->add_option(name, v, help)->delimiter(',')->expected(2);
  };

  // set
  auto* set = app.add_subcommand("set", "Build and inspect compact sets");
  set->require_subcommand(1);
  std::string spec, out_path, set_path;
  std::vector<std::string> kv;
  double h = 1.0 / 64;
  auto* set_build = set->add_subcommand("build", "Construct a named set");
  set_build->add_option("--spec", spec, "Set name")->required();
  set_build->add_option("--param", kv, "key=value (repeatable)");
  set_build->set_help_flag("--help", "Print this help message and exit");
  set_build->add_option("--h", h, "Cell size for planar sets");
  set_build->add_option("--out", out_path, "Write the set document here");
  bind(set_build, [&] {
    Session s(g);
    SetHandle sh;
    const std::string p = params_json(kv);
    s.check(c1k_set_build(s.ctx(), spec.c_str(), p.c_str(), h, &sh.p));
    char* out = nullptr;
    json doc = s.call(c1k_set_to_json(s.ctx(), sh.p, &out), out);
    json res = {{"info", s.call(c1k_set_info(s.ctx(), sh.p, &out), out)}};
    if (out_path.empty())
      res["set"] = doc;
    else
      write_atomic(out_path, doc.dump(2) + "\n");
    return s.finish("set build", res);
  });
  auto* set_info = set->add_subcommand("info", "Summarize a set document");
  set_info->add_option("--set", set_path)->required();
  bind(set_info, [&] {
    Session s(g);
    SetHandle sh;
    load_set(s, set_path, sh);
    char* out = nullptr;
    return s.finish("set info", s.call(c1k_set_info(s.ctx(), sh.p, &out), out));
  });

  // path
  auto* path = app.add_subcommand("path", "Path integrals");
  path->require_subcommand(1);
  std::string field, path_file;
  int levels = 12;
  auto* integrate = path->add_subcommand("integrate", "Integrate a vector field along a polyline");
  integrate->add_option("--field", field, "constant:a,b | linear:a,b,c,d | gradient-xy | rotation")
      ->required();
  integrate->add_option("--path", path_file)->required();
  integrate->add_option("--levels", levels)->check(CLI::Range(1, 24));
  bind(integrate, [&] {
    Session s(g);
    const std::string text = s.input(path_file);
    char* out = nullptr;
    return s.finish("path integrate",
                    s.call(c1k_path_integrate(s.ctx(), field.c_str(), text.c_str(), levels, &out), out));
  });

  // metric
  auto* metric = app.add_subcommand("metric", "Intrinsic metric on planar sets");
  metric->require_subcommand(1);
  std::vector<double> source, target, pt;
  double eps = 0.0, delta = 0.5;
  int order = 0;
  int refinements = -1;
  std::string mode;
  auto* geo = metric->add_subcommand("geodesic", "Grid geodesic distances");
  geo->add_option("--set", set_path)->required();
  point_opt(geo, "--source", source, "x,y")->required();
  point_opt(geo, "--target", target, "x,y");
  geo->add_option("--dilate", eps, "Dilation radius");
  geo->add_option("--order", order, "Stencil order (8 or 16)");
  bind(geo, [&] {
    Session s(g);
    SetHandle sh;
    load_set(s, set_path, sh);
    char* out = nullptr;
    return s.finish("metric geodesic",
                    s.call(c1k_geodesic(s.ctx(), sh.p, source[0], source[1], coord(target, 0),
                                        coord(target, 1), eps, order, &out),
                           out));
  });
  auto* reg = metric->add_subcommand("regularity", "Whitney constants over refinements");
  reg->add_option("--set", set_path)->required();
  reg->add_option("--mode", mode, "pointwise | uniform | interior | local")->required();
  point_opt(reg, "--point", pt, "x,y");
  reg->add_option("--delta", delta);
  reg->add_option("--refinements", refinements, "Doublings after the base raster")
      ->check(CLI::Range(0, 8));
  bind(reg, [&] {
    Session s(g);
    SetHandle sh;
    load_set(s, set_path, sh);
    char* out = nullptr;
    return s.finish("metric regularity",
                    s.call(c1k_regularity(s.ctx(), sh.p, mode.c_str(), coord(pt, 0), coord(pt, 1),
                                          delta, refinements, &out),
                           out));
  });
  auto* comp = metric->add_subcommand("completeness", "Completeness verdict");
  comp->add_option("--set", set_path)->required();
  point_opt(comp, "--probe", pt, "x,y");
  bind(comp, [&] {
    Session s(g);
    SetHandle sh;
    load_set(s, set_path, sh);
    char* out = nullptr;
    return s.finish("metric completeness",
                    s.call(c1k_completeness(s.ctx(), sh.p, coord(pt, 0), coord(pt, 1), &out), out));
  });

  // sigma
  double xi = 0.0;
  std::string policy_path;
  auto* sig = app.add_subcommand("sigma", "Gap-ratio invariant at a point");
  sig->add_option("--set", set_path)->required();
  sig->add_option("--xi", xi)->required();
  sig->add_option("--policy", policy_path, "Sigma policy overrides (JSON)");
  bind(sig, [&] {
    Session s(g);
    SetHandle sh;
    load_set(s, set_path, sh);
    std::string policy;
    if (!policy_path.empty()) policy = s.input(policy_path);
    char* out = nullptr;
    return s.finish("sigma",
                    s.call(c1k_sigma(s.ctx(), sh.p, xi, policy.empty() ? nullptr : policy.c_str(), &out),
                           out));
  });

  // decide-equality
  auto* eq = app.add_subcommand("decide-equality", "Decide whether C1(K) equals the restriction class");
  eq->add_option("--set", set_path)->required();
  bind(eq, [&] {
    Session s(g);
    SetHandle sh;
    load_set(s, set_path, sh);
    char* out = nullptr;
    return s.finish("decide-equality", s.call(c1k_decide_equality(s.ctx(), sh.p, &out), out));
  });

  // counterexample
  int windows = 30;
  auto* cx = app.add_subcommand("counterexample", "Build a locally constant counterexample jet");
  cx->add_option("--set", set_path)->required();
  cx->add_option("--xi", xi)->required();
  cx->add_option("--windows", windows)->check(CLI::Range(1, 200));
  cx->add_option("--out", out_path, "Write the jet document here");
  bind(cx, [&] {
    Session s(g);
    SetHandle sh;
    load_set(s, set_path, sh);
    char* out = nullptr;
    json res = s.call(c1k_counterexample(s.ctx(), sh.p, xi, windows, &out), out);
    if (!out_path.empty()) write_atomic(out_path, res["jet"].dump(2) + "\n");
    return s.finish("counterexample", res);
  });

  // jet
  auto* jet = app.add_subcommand("jet", "Sampled jets");
  jet->require_subcommand(1);
  std::string jet_path;
  std::string ladder = "default";
  double rho = 0.0, radius = 0.0;
  auto load_jet = [](Session& s, const std::string& path, JetHandle& jh) {
    const std::string text = s.input(path);
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    s.check(csv ? c1k_jet_from_csv(s.ctx(), text.c_str(), &jh.p)
                : c1k_jet_from_json(s.ctx(), text.c_str(), &jh.p));
  };
  auto* verify = jet->add_subcommand("verify", "Differentiability residual ladders");
  verify->add_option("--jet", jet_path)->required();
  verify->add_option("--ladder", ladder, "default, or the number of radii");
  bind(verify, [&] {
    int count = 10;
    if (ladder != "default") {
      try {
        std::size_t used = 0;
        count = std::stoi(ladder, &used);
        if (used != ladder.size() || count < 1 || count > 40) throw std::out_of_range(ladder);
      } catch (const std::logic_error&) {
        throw Failure{kExitUsage, "--ladder must be default or an integer in [1, 40]"};
      }
    }
    Session s(g);
    JetHandle jh;
    load_jet(s, jet_path, jh);
    char* out = nullptr;
    return s.finish("jet verify", s.call(c1k_jet_verify(s.ctx(), jh.p, count, &out), out));
  });
  auto* jnorms = jet->add_subcommand("norms", "Sup, Lipschitz and C1 norms");
  jnorms->add_option("--jet", jet_path)->required();
  bind(jnorms, [&] {
    Session s(g);
    JetHandle jh;
    load_jet(s, jet_path, jh);
    char* out = nullptr;
    return s.finish("jet norms", s.call(c1k_jet_norms(s.ctx(), jh.p, &out), out));
  });
  auto* extend = jet->add_subcommand("extend", "Extend a jet to the plane");
  extend->add_option("--jet", jet_path)->required();
  extend->add_option("--mode", mode, "pou | blowup")->required();
  auto* rho_opt = extend->add_option("--rho", rho, "Square side (pou)");
  auto* r_opt = extend->add_option("--r", radius, "Blow-up factor (blowup)");
  rho_opt->excludes(r_opt);
  extend->add_option("--set", set_path, "Carrier raster (blowup)");
  bind(extend, [&] {
    if (mode == "pou" && rho_opt->count() == 0) throw Failure{kExitUsage, "pou needs --rho"};
    if (mode == "blowup" && r_opt->count() == 0) throw Failure{kExitUsage, "blowup needs --r"};
    const double param = mode == "blowup" ? radius : rho;
    Session s(g);
    JetHandle jh;
    SetHandle sh;
    load_jet(s, jet_path, jh);
    if (!set_path.empty()) load_set(s, set_path, sh);
    char* out = nullptr;
    return s.finish("jet extend",
                    s.call(c1k_jet_extend(s.ctx(), jh.p, sh.p, mode.c_str(), param, &out), out));
  });

  // charge
  auto* charge = app.add_subcommand("charge", "Charges and path decompositions");
  charge->require_subcommand(1);
  std::string in_path, decomposition_path, against_path;
  std::vector<double> grid;
  auto* cpath = charge->add_subcommand("from-path", "Charge of a polyline");
  cpath->add_option("--path", path_file)->required();
  cpath->add_option("--grid", grid, "ox,oy,h,nx,ny")->delimiter(',')->expected(5)->required();
  cpath->add_option("--out", out_path, "Write the charge document here");
  bind(cpath, [&] {
    const auto whole = [](double v) { return std::floor(v) == v && v >= 1 && v <= 1 << 20; };
    if (!whole(grid[3]) || !whole(grid[4])) throw Failure{kExitUsage, "grid extents must be positive integers"};
    Session s(g);
    ChargeHandle ch;
    const std::string text = s.input(path_file);
    s.check(c1k_charge_from_path(s.ctx(), text.c_str(), grid[0], grid[1], grid[2],
                                 static_cast<int>(grid[3]), static_cast<int>(grid[4]), &ch.p));
    char* out = nullptr;
    json doc = s.call(c1k_charge_to_json(s.ctx(), ch.p, &out), out);
    json res = {{"info", s.call(c1k_charge_info(s.ctx(), ch.p, &out), out)}};
    if (out_path.empty())
      res["charge"] = doc;
    else
      write_atomic(out_path, doc.dump(2) + "\n");
    return s.finish("charge from-path", res);
  });
  auto* cinfo = charge->add_subcommand("info", "Summarize a charge");
  cinfo->add_option("--in", in_path)->required();
  bind(cinfo, [&] {
    Session s(g);
    ChargeHandle ch;
    const std::string text = s.input(in_path);
    s.check(c1k_charge_from_json(s.ctx(), text.c_str(), &ch.p));
    char* out = nullptr;
    return s.finish("charge info", s.call(c1k_charge_info(s.ctx(), ch.p, &out), out));
  });
  auto* dec = charge->add_subcommand("decompose", "Decompose a charge into weighted paths");
  dec->add_option("--in", in_path)->required();
  dec->add_option("--mode", mode, "exact | float")->check(CLI::IsMember({"exact", "float"}));
  dec->add_option("--out", out_path, "Write the decomposition document here");
  bind(dec, [&] {
    Session s(g);
    ChargeHandle ch;
    const std::string text = s.input(in_path);
    s.check(c1k_charge_from_json(s.ctx(), text.c_str(), &ch.p));
    const int exact = mode.empty() ? -1 : (mode == "exact" ? 1 : 0);
    char* out = nullptr;
    json d = s.call(c1k_charge_decompose(s.ctx(), ch.p, exact, &out), out);
    if (!out_path.empty()) write_atomic(out_path, d.dump(2) + "\n");
    return s.finish("charge decompose", d);
  });
  auto* chk = charge->add_subcommand("check", "Verify a decomposition against its charge");
  chk->add_option("--decomposition", decomposition_path)->required();
  chk->add_option("--against", against_path)->required();
  bind(chk, [&] {
    Session s(g);
    ChargeHandle ch;
    const std::string dtext = s.input(decomposition_path);
    const std::string ctext = s.input(against_path);
    s.check(c1k_charge_from_json(s.ctx(), ctext.c_str(), &ch.p));
    char* out = nullptr;
    return s.finish("charge check",
                    s.call(c1k_charge_check(s.ctx(), dtext.c_str(), ch.p, &out), out));
  });

  // gallery
  auto* gallery = app.add_subcommand("gallery", "Worked examples with built-in checks");
  gallery->require_subcommand(1);
  std::string id;
  bool check_exit = false;
  auto* glist = gallery->add_subcommand("list", "List examples");
  bind(glist, [&] {
    Session s(g);
    char* out = nullptr;
    return s.finish("gallery list", s.call(c1k_gallery_list(s.ctx(), &out), out));
  });
  auto* grun = gallery->add_subcommand("run", "Run an example and its checks");
  grun->add_option("id", id)->required();
  grun->add_option("--param", kv, "key=value (repeatable)");
  grun->add_flag("--check", check_exit, "Exit 1 when a check fails");
  bind(grun, [&] {
    Session s(g);
    const std::string p = params_json(kv);
    char* out = nullptr;
    json r = s.call(c1k_gallery_run(s.ctx(), id.c_str(), p.c_str(), &out), out);
    const int rc = s.finish("gallery run", r);
    return rc == 0 && check_exit && !r.value("passed", false) ? 1 : rc;
  });
  auto* gbuild = gallery->add_subcommand("build", "Write an example's artifacts");
  gbuild->add_option("id", id)->required();
  gbuild->add_option("--param", kv, "key=value (repeatable)");
  gbuild->add_option("--out", out_path)->required();
  bind(gbuild, [&] {
    Session s(g);
    const std::string p = params_json(kv);
    char* out = nullptr;
    json a = s.call(c1k_gallery_build(s.ctx(), id.c_str(), p.c_str(), &out), out);
    write_atomic(out_path, a.dump(2) + "\n");
    return s.finish("gallery build", {{"id", a["id"]}, {"params", a["params"]}, {"out", out_path}});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const Failure& f) {
    std::cerr << "c1k: error: " << f.message << "\n";
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "c1k: error: " << e.what() << "\n";
    return 70;
  }
}
