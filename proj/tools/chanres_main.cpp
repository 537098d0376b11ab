// chanres: command-line front end for the channel resource toolkit.
//
// Exit codes: 0 success, 2 validation/user-input error, 3 solver failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <chanres/channel.hpp>
#include <chanres/free_sets.hpp>
#include <chanres/monotones.hpp>
#include <chanres/norms.hpp>
#include <chanres/protocols.hpp>
#include <chanres/serialize.hpp>

namespace {

using chanres::Channel;
using chanres::FreeSetSpec;
using chanres::Matrix;
using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

// All numbers are reported with 9 significant digits; the JSON document
// stores the rounded value so every renderer sees identical data.
double round9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

std::string fmt9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string scalar_to_text(const json& v) {
  if (v.is_number_float()) return fmt9(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void render_scalars(std::ostream& os, const std::string& prefix,
                    const json& obj) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (it.key() == "rows" || it.key() == "columns") continue;
    if (it->is_object()) {
      render_scalars(os, prefix + it.key() + ".", *it);
    } else if (!it->is_array()) {
      os << prefix << it.key() << ": " << scalar_to_text(*it) << "\n";
    }
  }
}

void render_rows_table(std::ostream& os, const json& columns,
                       const json& rows) {
  std::vector<std::string> names;
  for (const auto& c : columns) names.push_back(c.get<std::string>());
  std::vector<size_t> width(names.size());
  for (size_t i = 0; i < names.size(); ++i) width[i] = names[i].size();
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (size_t i = 0; i < names.size(); ++i) {
      std::string cell = row.contains(names[i])
                             ? scalar_to_text(row.at(names[i]))
                             : "";
      width[i] = std::max(width[i], cell.size());
      line.push_back(std::move(cell));
    }
    cells.push_back(std::move(line));
  }
  auto pad = [](const std::string& s, size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  for (size_t i = 0; i < names.size(); ++i)
    os << pad(names[i], width[i]) << (i + 1 < names.size() ? "  " : "\n");
  for (const auto& line : cells)
    for (size_t i = 0; i < names.size(); ++i)
      os << pad(line[i], width[i]) << (i + 1 < names.size() ? "  " : "\n");
}

std::string render_table(const json& doc) {
  std::ostringstream os;
  os << "chanres " << doc.at("verb").get<std::string>() << "\n";
  for (const char* section : {"inputs", "params", "results", "provenance"}) {
    if (!doc.contains(section)) continue;
    render_scalars(os, std::string(section) + ".", doc.at(section));
  }
  const json& results = doc.at("results");
  if (results.contains("rows"))
    render_rows_table(os, results.at("columns"), results.at("rows"));
  return os.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const json& doc) {
  std::ostringstream os;
  const json& results = doc.at("results");
  if (results.contains("rows")) {
    const json& columns = results.at("columns");
    for (size_t i = 0; i < columns.size(); ++i)
      os << csv_escape(columns[i].get<std::string>())
         << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : results.at("rows")) {
      for (size_t i = 0; i < columns.size(); ++i) {
        const std::string name = columns[i].get<std::string>();
        os << (row.contains(name) ? csv_escape(scalar_to_text(row.at(name)))
                                  : "")
           << (i + 1 < columns.size() ? "," : "\n");
      }
    }
    return os.str();
  }
  // single-row CSV over the scalar result fields
  std::vector<std::string> keys, vals;
  for (auto it = results.begin(); it != results.end(); ++it) {
    if (it->is_object() || it->is_array()) continue;
    keys.push_back(it.key());
    vals.push_back(scalar_to_text(*it));
  }
  for (size_t i = 0; i < keys.size(); ++i)
    os << csv_escape(keys[i]) << (i + 1 < keys.size() ? "," : "\n");
  for (size_t i = 0; i < vals.size(); ++i)
    os << csv_escape(vals[i]) << (i + 1 < vals.size() ? "," : "\n");
  return os.str();
}

std::string emit(const json& doc, const std::string& format) {
  if (format == "json") return doc.dump(2) + "\n";
  if (format == "csv") return render_csv(doc);
  return render_table(doc);
}

chanres::SolveOptions solver_from_env() {
  chanres::SolveOptions opts;
  if (const char* tol = std::getenv("CHANRES_SOLVER_TOL")) {
    double v = std::strtod(tol, nullptr);
    if (v > 0 && v < 1) {
      opts.gap_tol = v;
      opts.feas_tol = v;
    }
  }
  return opts;
}

json provenance(const chanres::SolveOptions& opts) {
  json p;
  p["tool_version"] = kVersion;
  p["solver_gap_tol"] = opts.gap_tol;
  p["solver_feas_tol"] = opts.feas_tol;
  return p;
}

// Shared free-set flags.
struct SpecFlags {
  std::string name;       // constant|mio|maxmixed|gibbs|constant-to
  std::string spec_path;  // full JSON spec file
  std::string ham_path;
  std::string target_path;
  double beta = 1.0;

  void attach(CLI::App* cmd, bool required) {
    auto* opt_name = cmd->add_option(
        "--free", name, "free set kind: constant|mio|maxmixed|gibbs|constant-to");
    auto* opt_file =
        cmd->add_option("--free-spec", spec_path, "free set JSON file");
    cmd->add_option("--gibbs-ham", ham_path,
                    "Hamiltonian matrix file (gibbs kind)");
    cmd->add_option("--free-target", target_path,
                    "target state matrix file (constant-to kind)");
    cmd->add_option("--beta", beta, "inverse temperature (gibbs kind)");
    opt_name->excludes(opt_file);
    if (required) {
      // one of the two must be given; validated in resolve()
    }
  }

  FreeSetSpec resolve(int din, int dout) const {
    if (!spec_path.empty()) {
      FreeSetSpec s = chanres::load_spec(spec_path);
      if (s.dim_in() != din || s.dim_out() != dout)
        throw chanres::DimensionMismatch(
            "free-set file dimensions do not match the channel");
      return s;
    }
    if (name == "constant") return FreeSetSpec::constant(din, dout);
    if (name == "mio") return FreeSetSpec::mio(din, dout);
    if (name == "maxmixed") return FreeSetSpec::max_mixed_preserving(din, dout);
    if (name == "gibbs") {
      if (ham_path.empty())
        throw chanres::ParseError("--free gibbs requires --gibbs-ham");
      Matrix h = chanres::load_matrix(ham_path);
      if (int(h.rows()) != din || din != dout)
        throw chanres::DimensionMismatch(
            "gibbs Hamiltonian must match the (square) channel dimension");
      return FreeSetSpec::gibbs(h, beta);
    }
    if (name == "constant-to") {
      if (target_path.empty())
        throw chanres::ParseError("--free constant-to requires --free-target");
      return FreeSetSpec::constant_to(
          chanres::DensityMatrix(chanres::load_matrix(target_path)), din);
    }
    throw chanres::ParseError(
        "no free set given: use --free or --free-spec (got '" + name + "')");
  }
};

chanres::RealVector parse_distribution(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size())
      throw chanres::ParseError("bad probability entry: " + item);
    vals.push_back(v);
  }
  if (vals.empty()) throw chanres::ParseError("empty probability vector");
  chanres::RealVector out(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) out(i) = vals[i];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"channel resource theory toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the verb

  std::string format = "table";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();

  chanres::SolveOptions solver = solver_from_env();

  // ---- dmax ----
  auto* c_dmax = app.add_subcommand("dmax", "channel max-relative entropy");
  std::string dmax_lhs, dmax_rhs;
  double dmax_eps = 0.0;
  c_dmax->add_option("--lhs", dmax_lhs, "channel file N")->required();
  c_dmax->add_option("--rhs", dmax_rhs, "channel file M")->required();
  c_dmax->add_option("--eps", dmax_eps,
                     "smoothing radius (half-diamond ball)");

  // ---- robust ----
  auto* c_rob = app.add_subcommand("robust", "channel robustness");
  std::string rob_file, rob_witness_out, rob_smoothed_out;
  double rob_eps = 0.0;
  SpecFlags rob_spec;
  c_rob->add_option("channel", rob_file, "channel file")->required();
  rob_spec.attach(c_rob, true);
  c_rob->add_option("--eps", rob_eps, "smoothing radius");
  c_rob->add_option("--witness-out", rob_witness_out,
                    "write the optimal free channel here");
  c_rob->add_option("--smoothed-out", rob_smoothed_out,
                    "write the optimal smoothing channel here");

  // ---- imax ----
  auto* c_imax = app.add_subcommand("imax", "channel max-information");
  std::string imax_file;
  c_imax->add_option("channel", imax_file, "channel file")->required();

  // ---- diamond ----
  auto* c_dia = app.add_subcommand("diamond", "diamond norm / distance");
  std::string dia_lhs, dia_rhs;
  c_dia->add_option("--lhs", dia_lhs, "channel file")->required();
  c_dia->add_option("--rhs", dia_rhs, "channel file")->required();

  // ---- dist-free ----
  auto* c_dtf = app.add_subcommand("dist-free", "diamond distance to the free set");
  std::string dtf_file, dtf_witness_out;
  SpecFlags dtf_spec;
  c_dtf->add_option("channel", dtf_file, "channel file")->required();
  dtf_spec.attach(c_dtf, true);
  c_dtf->add_option("--witness-out", dtf_witness_out,
                    "write the closest free channel here");

  // ---- power ----
  auto* c_pow = app.add_subcommand("power", "increasing / generating power");
  std::string pow_file, pow_monotone = "coherence", pow_kind = "increasing",
              pow_ham;
  bool pow_complete = false;
  int pow_starts = 20, pow_anc = 0;
  std::uint64_t pow_seed = 12345;
  double pow_beta = 1.0;
  c_pow->add_option("channel", pow_file, "channel file")->required();
  c_pow->add_option("--monotone", pow_monotone, "coherence|free-energy")
      ->check(CLI::IsMember({"coherence", "free-energy"}));
  c_pow->add_option("--kind", pow_kind, "increasing|generating")
      ->check(CLI::IsMember({"increasing", "generating"}));
  c_pow->add_flag("--complete", pow_complete, "optimize with an ancilla");
  c_pow->add_option("--ham", pow_ham, "Hamiltonian file (free-energy)");
  c_pow->add_option("--beta", pow_beta, "inverse temperature (free-energy)");
  c_pow->add_option("--starts", pow_starts, "multistart count");
  c_pow->add_option("--seed", pow_seed, "random seed");
  c_pow->add_option("--ancilla-dim", pow_anc, "ancilla dimension (complete)");

  // ---- convex-split ----
  auto* c_cs = app.add_subcommand("convex-split", "convex-split mixture check");
  std::string cs_alpha, cs_beta;
  int cs_n = 2;
  c_cs->add_option("--alpha", cs_alpha, "channel file")->required();
  c_cs->add_option("--beta", cs_beta, "channel file")->required();
  c_cs->add_option("--n", cs_n, "number of registers")->required();

  // ---- erasure ----
  auto* c_er = app.add_subcommand("erasure", "catalytic resource erasure");
  std::string er_file;
  double er_eps = 0.6, er_eta = 0.1;
  SpecFlags er_spec;
  chanres::ProtocolBudget er_budget;
  c_er->add_option("channel", er_file, "channel file")->required();
  er_spec.attach(c_er, true);
  c_er->add_option("--eps", er_eps, "target erasure error")->required();
  c_er->add_option("--eta", er_eta, "smoothing split parameter")->required();
  c_er->add_option("--budget-choi", er_budget.max_choi_dim,
                   "max Choi dimension for the full SDP path");
  c_er->add_option("--budget-dense", er_budget.max_dense_output_dim,
                   "max output dimension for the dense shortcut");
  c_er->add_option("--budget-n", er_budget.max_symmetric_n,
                   "max n for the qubit symmetric shortcut");

  // ---- simulate-check ----
  auto* c_sim = app.add_subcommand("simulate-check", "verify a simulation triple");
  std::string sim_channel, sim_target, sim_pre, sim_post;
  double sim_eps = 0.0;
  SpecFlags sim_spec;
  c_sim->add_option("--channel", sim_channel, "resource channel file")->required();
  c_sim->add_option("--target", sim_target, "target channel file")->required();
  c_sim->add_option("--pre", sim_pre, "encoding channel file")->required();
  c_sim->add_option("--post", sim_post, "decoding channel file")->required();
  sim_spec.attach(c_sim, true);
  c_sim->add_option("--eps", sim_eps, "simulation error tolerance");

  // ---- axioms ----
  auto* c_ax = app.add_subcommand("axioms", "free-set axiom report");
  SpecFlags ax_spec;
  int ax_din = 2, ax_dout = 2, ax_trials = 20;
  std::uint64_t ax_seed = 7;
  ax_spec.attach(c_ax, true);
  c_ax->add_option("--dim-in", ax_din, "input dimension");
  c_ax->add_option("--dim-out", ax_dout, "output dimension");
  c_ax->add_option("--trials", ax_trials, "sampled trials per axiom");
  c_ax->add_option("--seed", ax_seed, "random seed");

  // ---- monotone-suite ----
  auto* c_ms = app.add_subcommand("monotone-suite", "monotone property suite");
  SpecFlags ms_spec;
  int ms_din = 2, ms_dout = 2, ms_trials = 20;
  std::uint64_t ms_seed = 7;
  ms_spec.attach(c_ms, true);
  c_ms->add_option("--dim-in", ms_din, "input dimension");
  c_ms->add_option("--dim-out", ms_dout, "output dimension");
  c_ms->add_option("--trials", ms_trials, "trials");
  c_ms->add_option("--seed", ms_seed, "random seed");

  // ---- majorize ----
  auto* c_maj = app.add_subcommand("majorize", "majorization check");
  std::string maj_p, maj_q;
  c_maj->add_option("--p", maj_p, "comma-separated distribution")->required();
  c_maj->add_option("--q", maj_q, "comma-separated distribution")->required();

  // ---- cq-cost ----
  auto* c_cq = app.add_subcommand("cq-cost", "cq-channel asymptotic cost");
  std::string cq_file;
  c_cq->add_option("channel", cq_file, "channel file (cq structure)")->required();

  // ---- render ----
  auto* c_ren = app.add_subcommand(
      "render", "re-render a previously saved JSON result document");
  std::string ren_file;
  c_ren->add_option("document", ren_file, "JSON result document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  }

  json doc;
  try {
    if (*c_dmax) {
      Channel lhs = chanres::load_channel(dmax_lhs);
      Channel rhs = chanres::load_channel(dmax_rhs);
      doc["verb"] = "dmax";
      doc["inputs"] = {{"lhs", dmax_lhs}, {"rhs", dmax_rhs}};
      doc["params"] = {{"eps", round9(dmax_eps)}};
      json results;
      if (dmax_eps == 0.0) {
        chanres::ExtReal v = chanres::channel_dmax(lhs, rhs);
        results["infinite"] = v.is_infinite();
        if (v.is_finite()) results["value_bits"] = round9(v.value());
      } else {
        chanres::SmoothParams sp;
        sp.epsilon = dmax_eps;
        sp.solver = solver;
        auto r = chanres::channel_dmax_smooth(lhs, rhs, sp);
        results["infinite"] = r.value.is_infinite();
        if (r.value.is_finite())
          results["value_bits"] = round9(r.value.value());
        results["state_lower_bound_bits"] = round9(r.state_lower_bound);
        results["solver_status"] = chanres::to_string(r.status);
      }
      doc["results"] = std::move(results);
    } else if (*c_rob) {
      Channel n = chanres::load_channel(rob_file);
      FreeSetSpec spec = rob_spec.resolve(n.dim_in(), n.dim_out());
      chanres::SmoothParams sp;
      sp.epsilon = rob_eps;
      sp.solver = solver;
      auto r = chanres::robustness(n, spec, sp);
      doc["verb"] = "robust";
      doc["inputs"] = {{"channel", rob_file}};
      doc["params"] = {{"free", chanres::to_string(spec.kind())},
                       {"eps", round9(rob_eps)}};
      json results;
      results["infinite"] = r.infinite;
      if (!r.infinite) {
        results["robustness"] = round9(r.robustness);
        results["log_robustness_bits"] = round9(r.log_robustness);
      }
      results["solver_status"] = chanres::to_string(r.status);
      if (!rob_witness_out.empty() && r.optimal_free) {
        chanres::save_channel(*r.optimal_free, rob_witness_out);
        results["witness_path"] = rob_witness_out;
      }
      if (!rob_smoothed_out.empty() && r.optimal_smoothed) {
        chanres::save_channel(*r.optimal_smoothed, rob_smoothed_out);
        results["smoothed_path"] = rob_smoothed_out;
      }
      doc["results"] = std::move(results);
    } else if (*c_imax) {
      Channel n = chanres::load_channel(imax_file);
      auto r = chanres::i_max(n, solver);
      doc["verb"] = "imax";
      doc["inputs"] = {{"channel", imax_file}};
      doc["params"] = json::object();
      doc["results"] = {{"value_bits", round9(r.value)},
                        {"constant_lr_crosscheck_bits",
                         round9(r.constant_lr_crosscheck)}};
    } else if (*c_dia) {
      Channel lhs = chanres::load_channel(dia_lhs);
      Channel rhs = chanres::load_channel(dia_rhs);
      double full = chanres::diamond_norm(
          chanres::HermitianPreservingMap::difference(lhs, rhs), solver);
      doc["verb"] = "diamond";
      doc["inputs"] = {{"lhs", dia_lhs}, {"rhs", dia_rhs}};
      doc["params"] = json::object();
      doc["results"] = {{"diamond_norm", round9(full)},
                        {"half_diamond_distance", round9(0.5 * full)}};
    } else if (*c_dtf) {
      Channel n = chanres::load_channel(dtf_file);
      FreeSetSpec spec = dtf_spec.resolve(n.dim_in(), n.dim_out());
      auto r = chanres::diamond_distance_to_free(n, spec, solver);
      doc["verb"] = "dist-free";
      doc["inputs"] = {{"channel", dtf_file}};
      doc["params"] = {{"free", chanres::to_string(spec.kind())}};
      json results;
      results["half_diamond_distance"] = round9(r.distance);
      results["solver_status"] = chanres::to_string(r.status);
      if (!dtf_witness_out.empty()) {
        chanres::save_channel(r.closest_free, dtf_witness_out);
        results["witness_path"] = dtf_witness_out;
      }
      doc["results"] = std::move(results);
    } else if (*c_pow) {
      Channel n = chanres::load_channel(pow_file);
      chanres::StateMonotone omega =
          pow_monotone == "coherence"
              ? chanres::StateMonotone::coherence()
              : chanres::StateMonotone::free_energy_monotone(
                    [&]() {
                      if (pow_ham.empty())
                        throw chanres::ParseError(
                            "--monotone free-energy requires --ham");
                      return chanres::load_matrix(pow_ham);
                    }(),
                    pow_beta);
      chanres::OptimOptions opt;
      opt.starts = pow_starts;
      opt.seed = pow_seed;
      opt.ancilla_dim = pow_anc;
      auto r = pow_kind == "increasing"
                   ? chanres::increasing_power(n, omega, pow_complete, opt)
                   : chanres::generating_power(n, omega, pow_complete, opt);
      doc["verb"] = "power";
      doc["inputs"] = {{"channel", pow_file}};
      doc["params"] = {{"monotone", pow_monotone},
                       {"kind", pow_kind},
                       {"complete", pow_complete},
                       {"starts", pow_starts},
                       {"seed", pow_seed}};
      doc["results"] = {{"value", round9(r.value)},
                        {"ancilla_dim_used", r.ancilla_dim_used},
                        {"certified", r.certified}};
    } else if (*c_cs) {
      Channel alpha = chanres::load_channel(cs_alpha);
      Channel beta = chanres::load_channel(cs_beta);
      chanres::ProtocolBudget budget;
      budget.solver = solver;
      auto r = chanres::convex_split(alpha, beta, cs_n, budget);
      doc["verb"] = "convex-split";
      doc["inputs"] = {{"alpha", cs_alpha}, {"beta", cs_beta}};
      doc["params"] = {{"n", cs_n}};
      json results;
      results["columns"] =
          json::array({"n", "lambda", "distance", "bound", "shortcut", "dim"});
      results["rows"] = json::array({json{{"n", r.n},
                                          {"lambda", round9(r.lambda)},
                                          {"distance", round9(r.measured_distance)},
                                          {"bound", round9(r.bound)},
                                          {"shortcut", r.used_shortcut},
                                          {"dim", r.gamma_dim}}});
      doc["results"] = std::move(results);
    } else if (*c_er) {
      Channel n = chanres::load_channel(er_file);
      FreeSetSpec spec = er_spec.resolve(n.dim_in(), n.dim_out());
      er_budget.solver = solver;
      auto r = chanres::erasure_protocol(n, spec, er_eps, er_eta, er_budget);
      doc["verb"] = "erasure";
      doc["inputs"] = {{"channel", er_file}};
      doc["params"] = {{"free", chanres::to_string(spec.kind())},
                       {"eps", round9(er_eps)},
                       {"eta", round9(er_eta)}};
      doc["results"] = {
          {"n_used", r.n_used},
          {"cost_bits", round9(r.cost_bits)},
          {"lr_value_bits", round9(r.lr_value)},
          {"upper_bound_bits", round9(r.upper_bound)},
          {"achieved_distance", round9(r.achieved_distance)},
          {"mixture_distance", round9(r.mixture_distance)},
          {"smoothing_distance", round9(r.smoothing_distance)},
          {"executed", r.executed},
          {"used_shortcut", r.used_shortcut},
          {"lower_bound_mu", round9(r.lower_bound_info.mu)},
          {"lower_bound_delta", round9(r.lower_bound_info.delta)},
          {"lower_bound_bits", round9(r.lower_bound_info.value)},
          {"lower_bound_convex_bits",
           round9(r.lower_bound_info.convex_value)}};
    } else if (*c_sim) {
      Channel n = chanres::load_channel(sim_channel);
      Channel target = chanres::load_channel(sim_target);
      Channel pre = chanres::load_channel(sim_pre);
      Channel post = chanres::load_channel(sim_post);
      FreeSetSpec spec = sim_spec.resolve(target.dim_in(), target.dim_out());
      auto r = chanres::verify_simulation(n, target, pre, post, spec, sim_eps,
                                          solver);
      doc["verb"] = "simulate-check";
      doc["inputs"] = {{"channel", sim_channel},
                       {"target", sim_target},
                       {"pre", sim_pre},
                       {"post", sim_post}};
      doc["params"] = {{"free", chanres::to_string(spec.kind())},
                       {"eps", round9(sim_eps)}};
      doc["results"] = {{"pre_free", r.pre_free},
                        {"post_free", r.post_free},
                        {"freeness_checkable", r.freeness_checkable},
                        {"half_diamond_distance", round9(r.distance)},
                        {"distance_ok", r.distance_ok},
                        {"pass", r.pass}};
    } else if (*c_ax) {
      FreeSetSpec spec = ax_spec.resolve(ax_din, ax_dout);
      auto r = chanres::axiom_check(spec, ax_trials, ax_seed);
      doc["verb"] = "axioms";
      doc["inputs"] = json::object();
      doc["params"] = {{"free", r.cone},
                       {"dim_in", ax_din},
                       {"dim_out", ax_dout},
                       {"trials", ax_trials},
                       {"seed", ax_seed}};
      json results;
      results["all_applicable_hold"] = r.all_applicable_hold();
      results["columns"] = json::array({"axiom", "applicable", "holds", "note"});
      json rows = json::array();
      for (const auto& f : r.findings)
        rows.push_back(json{{"axiom", f.axiom},
                            {"applicable", f.applicable},
                            {"holds", f.holds},
                            {"note", f.note}});
      results["rows"] = std::move(rows);
      doc["results"] = std::move(results);
    } else if (*c_ms) {
      FreeSetSpec spec = ms_spec.resolve(ms_din, ms_dout);
      auto r = chanres::monotone_suite(spec, ms_trials, ms_seed);
      doc["verb"] = "monotone-suite";
      doc["inputs"] = json::object();
      doc["params"] = {{"free", r.cone},
                       {"dim_in", ms_din},
                       {"dim_out", ms_dout},
                       {"trials", ms_trials},
                       {"seed", ms_seed}};
      json results;
      results["checks_run"] = r.checks_run;
      results["violations"] = int(r.violations.size());
      results["clean"] = r.clean();
      results["columns"] =
          json::array({"property", "trial", "lhs", "rhs", "note"});
      json rows = json::array();
      for (const auto& v : r.violations)
        rows.push_back(json{{"property", v.property},
                            {"trial", v.trial},
                            {"lhs", round9(v.lhs)},
                            {"rhs", round9(v.rhs)},
                            {"note", v.note}});
      results["rows"] = std::move(rows);
      doc["results"] = std::move(results);
    } else if (*c_maj) {
      chanres::RealVector p = parse_distribution(maj_p);
      chanres::RealVector q = parse_distribution(maj_q);
      bool result = chanres::majorizes(p, q);
      doc["verb"] = "majorize";
      doc["inputs"] = json::object();
      doc["params"] = {{"p", maj_p}, {"q", maj_q}};
      doc["results"] = {{"majorizes", result}};
    } else if (*c_cq) {
      Channel n = chanres::load_channel(cq_file);
      double v = chanres::cq_asymptotic_cost(n);
      doc["verb"] = "cq-cost";
      doc["inputs"] = {{"channel", cq_file}};
      doc["params"] = json::object();
      doc["results"] = {{"value_bits", round9(v)}};
    } else if (*c_ren) {
      std::ifstream in(ren_file, std::ios::binary);
      if (!in) throw chanres::ParseError("cannot open document: " + ren_file);
      std::ostringstream ss;
      ss << in.rdbuf();
      doc = json::parse(ss.str(), nullptr, false);
      if (doc.is_discarded() || !doc.is_object() || !doc.contains("verb"))
        throw chanres::ParseError("not a chanres result document");
      std::cout << emit(doc, format);
      return 0;
    }
    doc["provenance"] = provenance(solver);
  } catch (const chanres::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::cout << emit(doc, format);
  return 0;
}
