// Copyright 2026 The qsph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "plot.hpp"
#include "qsph/app.hpp"
#include "qsph/error.hpp"
#include "qsph/io.hpp"

namespace qsph::app {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename T>
T field(const json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::Configuration, std::string("config field '") + key + "' is missing or has the wrong type");
  }
}

template <typename T>
T nested(const json& cfg, const char* group, const char* key) {
  try {
    return cfg.at(group).at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::Configuration,
         std::string("config field '") + group + "." + key + "' is missing or has the wrong type");
  }
}

/// Overlays user values on the defaults; unknown keys are rejected by name.
json merge(const json& defaults, const json& user, const std::string& prefix) {
  json out = defaults;
  if (user.is_null()) return out;
  require(user.is_object(), ErrorKind::Configuration, "config" + (prefix.empty() ? "" : " field '" + prefix + "'") +
                                                          " must be a JSON object");
  for (const auto& [k, v] : user.items()) {
    const std::string name = prefix.empty() ? k : prefix + "." + k;
    require(defaults.contains(k), ErrorKind::Configuration, "unknown config field '" + name + "'");
    if (defaults.at(k).is_object()) {
      out[k] = merge(defaults.at(k), v, name);
    } else {
      out[k] = v;
    }
  }
  return out;
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", t);
  return buf;
}

void write_trace(const std::string& path, const std::vector<train::TraceRow>& trace) {
  io::CsvWriter w(path, {"epoch", "train_loss", "test_loss", "wall_ms"});
  for (const auto& r : trace) w.row(r.epoch, r.train_loss, r.test_loss, r.wall_ms);
}

plot::Series trace_series(const std::vector<train::TraceRow>& trace, bool test) {
  plot::Series s;
  for (const auto& r : trace) {
    s.x.push_back(r.epoch);
    s.y.push_back(test ? r.test_loss : r.train_loss);
  }
  return s;
}

hybrid::ModelRecipe recipe_from(const json& cfg) {
  hybrid::ModelRecipe r;
  r.level = hybrid::level_from_string(field<std::string>(cfg, "model"));
  r.family = qnn::family_from_string(field<std::string>(cfg, "family"));
  r.head = qnn::head_kind_from_string(field<std::string>(cfg, "head"));
  const auto enc = field<std::string>(cfg, "encoder");
  require(enc == "angle" || enc == "amplitude", ErrorKind::Configuration,
          "config field 'encoder' must be angle or amplitude");
  r.encoder = enc == "angle" ? qnn::EncoderKind::Angle : qnn::EncoderKind::Amplitude;
  r.n_qubits = field<int>(cfg, "n_qubits");
  r.n_layers = field<int>(cfg, "n_layers");
  require(r.n_qubits >= 1 && r.n_qubits <= 12, ErrorKind::Configuration, "config field 'n_qubits' must lie in 1..12");
  require(r.n_layers >= 1, ErrorKind::Configuration, "config field 'n_layers' must be >= 1");
  return r;
}

train::NoiseSpec noise_from(const json& cfg) {
  train::NoiseSpec n;
  n.readout_sigma = field<double>(cfg, "noise_sigma");
  require(n.readout_sigma >= 0.0, ErrorKind::Configuration, "config field 'noise_sigma' must be >= 0");
  n.seed = field<std::uint64_t>(cfg, "seed") + 3;
  return n;
}

json model_defaults() {
  return {{"model", "crossed"},   {"family", "qmlp"}, {"head", "pauliz"}, {"encoder", "angle"},
          {"n_qubits", 4},        {"n_layers", 2},    {"lr", 0.01},       {"bs", 640},
          {"epochs", 500},        {"noise_sigma", 0.0}, {"seed", 1},      {"plot", false}};
}

json field_defaults() {
  return {{"n", 32}, {"t", 0.0}, {"phase_seed", 7}};
}

FieldTaskSpec field_spec(const json& cfg) {
  FieldTaskSpec s;
  s.n = nested<int>(cfg, "field", "n");
  s.t = nested<double>(cfg, "field", "t");
  s.phase_seed = nested<std::uint64_t>(cfg, "field", "phase_seed");
  return s;
}

FitSpec fit_spec(const json& cfg, hybrid::ModelRecipe recipe) {
  FitSpec fs;
  fs.recipe = std::move(recipe);
  fs.lr = field<double>(cfg, "lr");
  fs.batch_size = field<int>(cfg, "bs");
  fs.epochs = field<int>(cfg, "epochs");
  fs.seed = field<std::uint64_t>(cfg, "seed");
  fs.noise = noise_from(cfg);
  return fs;
}

json fit_field(const json& cfg, const std::string& out) {
  const auto t0 = Clock::now();
  const auto task = make_field_task(field_spec(cfg));
  auto recipe = recipe_from(cfg);
  const auto base = field_recipe(recipe.level, recipe.family, recipe.head);
  recipe.input_width = base.input_width;
  recipe.input_lower = base.input_lower;
  recipe.input_upper = base.input_upper;
  const auto res = fit_dataset(task.data, fit_spec(cfg, recipe));

  write_trace(out + "/loss.csv", res.trace);
  std::vector<double> xs, ys, target, err;
  {
    io::CsvWriter wf(out + "/field.csv", {"x", "y", "target", "prediction"});
    io::CsvWriter we(out + "/error_map.csv", {"x", "y", "err", "abs_err"});
    for (std::size_t k = 0; k < task.rows.size(); ++k) {
      const auto p = task.ps.pos[task.rows[k]];
      const double y = task.data.y_row(k)[0];
      const double e = res.prediction[k] - y;
      wf.row(p.x, p.y, y, res.prediction[k]);
      we.row(p.x, p.y, e, std::abs(e));
      xs.push_back(p.x);
      ys.push_back(p.y);
      target.push_back(y);
      err.push_back(e);
    }
  }
  const json model_doc = hybrid::to_json(res.model, res.params);
  const std::string model_text = model_doc.dump(2);
  io::write_text(out + "/model.json", model_text + "\n");
  const auto m = bench::error_metrics(res.prediction, target);

  if (field<bool>(cfg, "plot")) {
    plot::heatmap(out + "/field_target.ppm", xs, ys, target);
    plot::heatmap(out + "/field_prediction.ppm", xs, ys, res.prediction);
    plot::heatmap(out + "/error_map.ppm", xs, ys, err);
    plot::lines(out + "/loss.ppm", {trace_series(res.trace, false), trace_series(res.trace, true)}, true);
  }
  return {{"n_samples", task.data.size()},
          {"n_params", res.params.size()},
          {"final_train_loss", res.final_train_loss},
          {"final_test_loss", res.final_test_loss},
          {"l2_rel", m.l2_rel},
          {"linf_rel", m.linf_rel},
          {"model_hash", fnv1a(model_text)},
          {"artifacts", {"loss.csv", "field.csv", "error_map.csv", "model.json"}},
          {"wall_ms", elapsed_ms(t0)}};
}

KernelTaskSpec kernel_spec(const json& cfg) {
  KernelTaskSpec s;
  s.spacing = field<double>(cfg, "spacing");
  const auto dist = field<std::string>(cfg, "distribution");
  require(dist == "regular" || dist == "irregular", ErrorKind::Configuration,
          "config field 'distribution' must be regular or irregular");
  s.irregular = dist == "irregular";
  s.jitter = field<double>(cfg, "jitter");
  s.jitter_seed = field<std::uint64_t>(cfg, "jitter_seed");
  const auto kern = field<std::string>(cfg, "kernel");
  require(kern == "plain" || kern == "corrected", ErrorKind::Configuration,
          "config field 'kernel' must be plain or corrected");
  s.corrected = kern == "corrected";
  require(s.spacing > 0.0 && s.spacing <= 0.25, ErrorKind::Configuration, "config field 'spacing' must lie in (0, 0.25]");
  return s;
}

json train_kernel(const json& cfg, const std::string& out) {
  const auto t0 = Clock::now();
  const auto task = make_kernel_task(kernel_spec(cfg));
  qkernel::KernelFitConfig kc;
  kc.recipe = recipe_from(cfg);
  kc.eta = qkernel::premap_from_string(field<std::string>(cfg, "premap"));
  kc.lr = field<double>(cfg, "lr");
  kc.batch_size = field<int>(cfg, "bs");
  kc.epochs = field<int>(cfg, "epochs");
  kc.seed = field<std::uint64_t>(cfg, "seed");
  kc.noise = noise_from(cfg);
  kc.fit_value = field<bool>(cfg, "fit_value");
  kc.fit_grad = field<bool>(cfg, "fit_grad");
  require(kc.fit_value || kc.fit_grad, ErrorKind::Configuration, "at least one of fit_value, fit_grad must be true");
  require(kc.lr > 0.0 && kc.batch_size > 0 && kc.epochs >= 0, ErrorKind::Configuration,
          "config fields 'lr', 'bs', 'epochs' out of range");
  const auto fit = qkernel::fit_kernel(task.dataset, kc);

  const std::string model_text = fit.kernel->to_json().dump(2);
  io::write_text(out + "/kernel_model.json", model_text + "\n");
  std::vector<std::string> artifacts{"kernel_model.json"};
  if (kc.fit_value) {
    write_trace(out + "/loss_value.csv", fit.value_trace);
    artifacts.push_back("loss_value.csv");
  }
  if (kc.fit_grad) {
    write_trace(out + "/loss_grad.csv", fit.grad_trace);
    artifacts.push_back("loss_grad.csv");
  }

  const double h = task.kernel.h;
  const double dv = task.spec.spacing * task.spec.spacing;
  const auto grid = radius_grid(h, field<int>(cfg, "grid_points"));
  const qkernel::ClassicalKernel plain(task.kernel);
  sph::Mat2 linv = sph::Mat2::identity();
  if (task.spec.corrected) {
    std::vector<std::size_t> interior;
    for (std::size_t i = 0; i < task.ps.size(); ++i)
      if (task.ps.interior[i]) interior.push_back(i);
    linv = sph::correction_matrix(task.ps, task.kernel, task.nl, interior[interior.size() / 2]).Linv;
  }
  const qkernel::ClassicalKernel reference(task.kernel, linv);
  const auto value_rows = qkernel::extract_kernel_space(*fit.kernel, plain, grid, dv, qkernel::Component::Value);
  const auto grad_rows = qkernel::extract_kernel_space(*fit.kernel, reference, grid, dv, qkernel::Component::GradX);
  auto max_res = [](const std::vector<qkernel::KernelSpaceRow>& rows) {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, std::abs(r.residual));
    return m;
  };
  if (field<bool>(cfg, "export_kernel_space")) {
    if (kc.fit_value) {
      qkernel::write_kernel_space_csv(out + "/kernel_space_value.csv", value_rows);
      artifacts.push_back("kernel_space_value.csv");
    }
    if (kc.fit_grad) {
      qkernel::write_kernel_space_csv(out + "/kernel_space_gradx.csv", grad_rows);
      artifacts.push_back("kernel_space_gradx.csv");
    }
  }
  if (field<bool>(cfg, "plot")) {
    auto curve = [](const std::vector<qkernel::KernelSpaceRow>& rows, bool learned) {
      plot::Series s;
      for (const auto& r : rows) {
        s.x.push_back(r.r);
        s.y.push_back(learned ? r.learned : r.classical);
      }
      return s;
    };
    if (kc.fit_value) plot::lines(out + "/kernel_space_value.ppm", {curve(value_rows, true), curve(value_rows, false)}, false);
    if (kc.fit_grad) plot::lines(out + "/kernel_space_gradx.ppm", {curve(grad_rows, true), curve(grad_rows, false)}, false);
  }

  json report{{"n_samples", task.dataset.samples.size()},
              {"h", h},
              {"dv_max", task.dataset.dv_max},
              {"model_hash", fnv1a(model_text)},
              {"clamp_count", fit.kernel->clamp_count()},
              {"artifacts", artifacts},
              {"wall_ms", elapsed_ms(t0)}};
  if (kc.fit_value) {
    report["value_final_train_loss"] = fit.value_trace.back().train_loss;
    report["value_max_residual"] = max_res(value_rows);
    report["value_residual_threshold"] = 0.05 * sph::quintic_w(0.0, task.kernel) * dv;
  }
  if (kc.fit_grad) {
    report["grad_final_train_loss"] = fit.grad_trace.back().train_loss;
    report["grad_max_residual"] = max_res(grad_rows);
  }
  return report;
}

bench::AdvectionSpec advection_spec(const json& cfg) {
  bench::AdvectionSpec s;
  s.spacing = field<double>(cfg, "spacing");
  s.dt = field<double>(cfg, "dt");
  s.period = field<double>(cfg, "period");
  s.ghost_layers = field<int>(cfg, "ghost_layers");
  s.h_ratio = field<double>(cfg, "h_ratio");
  s.snapshot_times = field<std::vector<double>>(cfg, "snapshots");
  require(!s.snapshot_times.empty(), ErrorKind::Configuration, "config field 'snapshots' must not be empty");
  require(s.spacing >= 0.005 && s.spacing <= 0.25, ErrorKind::Configuration,
          "config field 'spacing' must lie in [0.005, 0.25]");
  s.validate();
  return s;
}

json advect(const json& cfg, const std::string& out) {
  const auto t0 = Clock::now();
  const auto spec = advection_spec(cfg);
  const auto op_name = field<std::string>(cfg, "operator");
  require(op_name == "classical" || op_name == "quantum", ErrorKind::Configuration,
          "config field 'operator' must be classical or quantum");
  const auto problem = bench::make_problem(spec);
  sph::GradientStencil op;
  std::size_t clamps = 0;
  std::vector<std::string> artifacts;
  if (op_name == "classical") {
    op = bench::classical_operator(problem);
    const auto k = lattice_classical_kernel(problem);
    io::write_text(out + "/classical_kernel.json", k.to_json().dump(2) + "\n");
    artifacts.push_back("classical_kernel.json");
  } else {
    const auto path = field<std::string>(cfg, "kernel");
    require(!path.empty(), ErrorKind::Configuration, "config field 'kernel' must name a kernel model file");
    require(std::filesystem::exists(path), ErrorKind::Configuration, "kernel model file '" + path + "' not found");
    json doc;
    try {
      doc = json::parse(io::read_text(path));
    } catch (const json::exception& e) {
      fail(ErrorKind::Configuration, "kernel model file '" + path + "' is not valid JSON: " + e.what());
    }
    const auto kernel = qkernel::kernel_from_json(doc);
    op = qkernel::kernel_stencil(*kernel, problem.ps, problem.nl);
    if (const auto* lk = dynamic_cast<const qkernel::LearnedKernel*>(kernel.get())) clamps = lk->clamp_count();
  }
  const auto res = bench::run_period(problem, op);

  json snaps = json::array();
  for (const auto& s : res.snapshots) {
    const std::string name = "snapshot_t" + time_tag(s.t) + ".csv";
    bench::write_snapshot_csv(out + "/" + name, s);
    artifacts.push_back(name);
    snaps.push_back({{"t", s.t}, {"l2_rel", s.l2_rel}, {"linf_rel", s.linf_rel}, {"max_abs", s.max_abs}, {"file", name}});
    if (field<bool>(cfg, "plot")) plot::heatmap(out + "/snapshot_t" + time_tag(s.t) + ".ppm", s.x, s.y, s.pred);
  }
  return {{"operator", op_name},
          {"n_particles", problem.ps.size()},
          {"n_interior", problem.interior.size()},
          {"steps", res.steps},
          {"snapshots", snaps},
          {"final_vs_initial_l2", res.final_vs_initial_l2},
          {"max_abs", res.max_abs},
          {"mass_initial", res.mass_initial},
          {"mass_final", res.mass_final},
          {"nan_count", res.nan_count},
          {"clamp_count", clamps},
          {"artifacts", artifacts},
          {"wall_ms", elapsed_ms(t0)}};
}

json compare(const json& cfg, const std::string& out) {
  const auto t0 = Clock::now();
  const auto task = make_field_task(field_spec(cfg));
  const auto families = field<std::vector<std::string>>(cfg, "families");
  const auto heads = field<std::vector<std::string>>(cfg, "heads");
  const auto models = field<std::vector<std::string>>(cfg, "models");
  const auto lrs = field<std::vector<double>>(cfg, "lrs");
  require(!families.empty() && !heads.empty() && !models.empty() && !lrs.empty(), ErrorKind::Configuration,
          "config fields 'families', 'heads', 'models', 'lrs' must be non-empty");

  io::CsvWriter wl(out + "/compare_loss.csv", {"family", "head", "model", "lr", "epoch", "train_loss", "test_loss"});
  io::CsvWriter wf(out + "/compare_final.csv",
                   {"family", "head", "model", "lr", "final_train_loss", "final_test_loss", "l2_rel"});
  std::map<std::tuple<std::string, std::string, double>, std::map<std::string, double>> pivot;
  json rows = json::array();
  std::vector<plot::Series> curves;
  for (const auto& fam : families) {
    for (const auto& head : heads) {
      for (const auto& mdl : models) {
        for (double lr : lrs) {
          json c = cfg;
          c["family"] = fam;
          c["head"] = head;
          c["model"] = mdl;
          c["lr"] = lr;
          auto recipe = recipe_from(c);
          const auto base = field_recipe(recipe.level, recipe.family, recipe.head);
          recipe.input_lower = base.input_lower;
          recipe.input_upper = base.input_upper;
          const auto res = fit_dataset(task.data, fit_spec(c, recipe));
          for (const auto& r : res.trace) wl.row(fam, head, mdl, lr, r.epoch, r.train_loss, r.test_loss);
          std::vector<double> target(task.data.y.begin(), task.data.y.end());
          const double l2 = bench::error_metrics(res.prediction, target).l2_rel;
          wf.row(fam, head, mdl, lr, res.final_train_loss, res.final_test_loss, l2);
          pivot[{fam, mdl, lr}][head] = res.final_train_loss;
          curves.push_back(trace_series(res.trace, false));
          rows.push_back({{"family", fam}, {"head", head}, {"model", mdl}, {"lr", lr},
                          {"final_train_loss", res.final_train_loss}, {"final_test_loss", res.final_test_loss},
                          {"l2_rel", l2}});
        }
      }
    }
  }
  {
    io::CsvWriter wp(out + "/compare_heads.csv", {"family", "model", "lr", "pauliz", "prob"});
    for (const auto& [key, by_head] : pivot) {
      auto cell = [&](const char* h) {
        const auto it = by_head.find(h);
        return it == by_head.end() ? std::string("") : io::fmt(it->second);
      };
      wp.row(std::get<0>(key), std::get<1>(key), std::get<2>(key), cell("pauliz"), cell("prob"));
    }
  }
  if (field<bool>(cfg, "plot")) plot::lines(out + "/compare_loss.ppm", curves, true);
  return {{"rows", rows},
          {"artifacts", {"compare_loss.csv", "compare_final.csv", "compare_heads.csv"}},
          {"wall_ms", elapsed_ms(t0)}};
}

}  // namespace

json default_config(const std::string& command) {
  if (command == "fit-field") {
    json c = model_defaults();
    c["field"] = field_defaults();
    return c;
  }
  if (command == "train-kernel") {
    json c = model_defaults();
    c["lr"] = 0.001;
    c["distribution"] = "regular";
    c["kernel"] = "plain";
    c["spacing"] = 0.04;
    c["jitter"] = 0.35;
    c["jitter_seed"] = 11;
    c["premap"] = "norm";
    c["fit_value"] = true;
    c["fit_grad"] = true;
    c["export_kernel_space"] = false;
    c["grid_points"] = 101;
    return c;
  }
  if (command == "advect") {
    return {{"operator", "classical"}, {"kernel", ""},      {"spacing", 0.02},    {"dt", 1e-4},
            {"period", 1.0},           {"ghost_layers", 3}, {"h_ratio", 1.2},     {"snapshots", {0.0, 0.15, 0.35, 0.60, 1.0}},
            {"plot", false}};
  }
  if (command == "compare") {
    json c = model_defaults();
    c.erase("family");
    c.erase("head");
    c.erase("model");
    c.erase("lr");
    c["families"] = {"qnn", "qmlp", "qcnn"};
    c["heads"] = {"pauliz", "prob"};
    c["models"] = {"crossed"};
    c["lrs"] = {0.01};
    c["field"] = field_defaults();
    return c;
  }
  fail(ErrorKind::Configuration, "unknown command '" + command + "' (expected fit-field|train-kernel|advect|compare)");
}

json run_command(const std::string& command, const json& config, const std::string& out_dir) {
  json cfg = merge(default_config(command), config, "");
  require(!out_dir.empty(), ErrorKind::Configuration, "output directory must be given");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  require(!ec && std::filesystem::is_directory(out_dir), ErrorKind::Io, "cannot create output directory '" + out_dir + "'");

  io::write_text(out_dir + "/run.json", cfg.dump(2) + "\n");
  json report;
  if (command == "fit-field") {
    report = fit_field(cfg, out_dir);
  } else if (command == "train-kernel") {
    report = train_kernel(cfg, out_dir);
  } else if (command == "advect") {
    report = advect(cfg, out_dir);
  } else {
    report = compare(cfg, out_dir);
  }
  report["command"] = command;
  report["config"] = cfg;
  io::write_text(out_dir + "/report.json", report.dump(2) + "\n");
  return report;
}

}  // namespace qsph::app
