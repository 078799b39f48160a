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

// qsph command-line front end. Everything goes through the C API.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsph/qsph.h"

using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;

struct Flags {
  std::string config_path;
  std::string out;
  std::optional<std::string> model, family, head, encoder;
  std::optional<double> lr, noise_sigma;
  std::optional<int> bs, epochs, n_qubits, n_layers;
  std::optional<long long> seed;
  bool noisy = false;
  bool plot = false;
  // train-kernel
  std::optional<std::string> distribution, kernel, premap;
  std::optional<double> spacing, jitter;
  bool export_kernel_space = false;
  bool value_only = false, grad_only = false;
  // advect
  std::optional<std::string> op;
  std::optional<double> dt;
  // compare
  std::vector<std::string> families, heads, models;
  std::vector<double> lrs;
};

void add_model_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--model", f.model, "Hierarchy level")->check(CLI::IsMember({"single", "forward", "crossed", "parallel"}));
  sub->add_option("--family", f.family, "Circuit family")->check(CLI::IsMember({"qnn", "qmlp", "qcnn"}));
  sub->add_option("--head", f.head, "Measurement head")->check(CLI::IsMember({"pauliz", "prob"}));
  sub->add_option("--encoder", f.encoder, "Feature encoder")->check(CLI::IsMember({"angle", "amplitude"}));
  sub->add_option("--qubits", f.n_qubits, "Circuit width");
  sub->add_option("--layers", f.n_layers, "Ansatz depth");
}

void add_train_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--lr", f.lr, "Adam learning rate");
  sub->add_option("--bs", f.bs, "Mini-batch size");
  sub->add_option("--epochs", f.epochs, "Training epochs (0 = untrained baseline)");
  sub->add_option("--noise-sigma", f.noise_sigma, "Gaussian readout noise on every head output");
  sub->add_flag("--noisy", f.noisy, "Shorthand for --noise-sigma 0.01");
  sub->add_option("--seed", f.seed, "Base seed");
}

void add_common_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config; flags override its values");
  sub->add_option("--out", f.out, "Output directory");
  sub->add_flag("--plot", f.plot, "Also render PPM images");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

template <typename T>
void put(json& cfg, const char* key, const std::optional<T>& v) {
  if (v) cfg[key] = *v;
}

json build_config(const std::string& command, const Flags& f) {
  json cfg = load_config(f.config_path);
  if (command == "compare") {
    if (f.model) cfg["models"] = {*f.model};
    if (f.family) cfg["families"] = {*f.family};
    if (f.head) cfg["heads"] = {*f.head};
    if (f.lr) cfg["lrs"] = {*f.lr};
    if (!f.models.empty()) cfg["models"] = f.models;
    if (!f.families.empty()) cfg["families"] = f.families;
    if (!f.heads.empty()) cfg["heads"] = f.heads;
    if (!f.lrs.empty()) cfg["lrs"] = f.lrs;
  } else if (command != "advect") {
    put(cfg, "model", f.model);
    put(cfg, "family", f.family);
    put(cfg, "head", f.head);
    put(cfg, "lr", f.lr);
  }
  if (command != "advect") {
    put(cfg, "encoder", f.encoder);
    put(cfg, "n_qubits", f.n_qubits);
    put(cfg, "n_layers", f.n_layers);
    put(cfg, "bs", f.bs);
    put(cfg, "epochs", f.epochs);
    put(cfg, "seed", f.seed);
    if (f.noisy) cfg["noise_sigma"] = 0.01;
    put(cfg, "noise_sigma", f.noise_sigma);
  }
  if (command == "train-kernel") {
    put(cfg, "distribution", f.distribution);
    put(cfg, "kernel", f.kernel);
    put(cfg, "premap", f.premap);
    put(cfg, "spacing", f.spacing);
    put(cfg, "jitter", f.jitter);
    if (f.export_kernel_space) cfg["export_kernel_space"] = true;
    if (f.value_only) cfg["fit_grad"] = false;
    if (f.grad_only) cfg["fit_value"] = false;
  }
  if (command == "advect") {
    put(cfg, "spacing", f.spacing);
    put(cfg, "dt", f.dt);
    if (f.op) {
      const std::string& op = *f.op;
      if (op == "classical") {
        cfg["operator"] = "classical";
      } else if (op.rfind("quantum:", 0) == 0) {
        cfg["operator"] = "quantum";
        cfg["kernel"] = op.substr(8);
      } else {
        throw std::runtime_error("--operator must be classical or quantum:<kernel model file>");
      }
    }
  }
  if (f.plot) cfg["plot"] = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum kernel networks for SPH"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qsph_version()));
  Flags f;

  auto* fit = app.add_subcommand("fit-field", "Fit a hybrid model to the static vortex field");
  add_common_flags(fit, f);
  add_model_flags(fit, f);
  add_train_flags(fit, f);

  auto* tk = app.add_subcommand("train-kernel", "Learn the SPH pair kernel from particle data");
  add_common_flags(tk, f);
  add_model_flags(tk, f);
  add_train_flags(tk, f);
  tk->add_option("--distribution", f.distribution, "Particle layout")->check(CLI::IsMember({"regular", "irregular"}));
  tk->add_option("--kernel", f.kernel, "Gradient targets")->check(CLI::IsMember({"plain", "corrected"}));
  tk->add_option("--premap", f.premap, "Gradient-model input map")->check(CLI::IsMember({"identity", "norm", "inner"}));
  tk->add_option("--spacing", f.spacing, "Lattice spacing");
  tk->add_option("--jitter", f.jitter, "Jitter amplitude as a fraction of the spacing");
  tk->add_flag("--export-kernel-space", f.export_kernel_space, "Write learned vs classical kernel over [0, 2h]");
  tk->add_flag("--value-only", f.value_only, "Fit only the value kernel");
  tk->add_flag("--grad-only", f.grad_only, "Fit only the gradient kernel");

  auto* adv = app.add_subcommand("advect", "Transport a scalar for one period of the swirling flow");
  add_common_flags(adv, f);
  adv->add_option("--operator", f.op, "classical or quantum:<kernel model file>");
  adv->add_option("--spacing", f.spacing, "Particle spacing");
  adv->add_option("--dt", f.dt, "Time step");

  auto* cmp = app.add_subcommand("compare", "Train a grid of models under one budget");
  add_common_flags(cmp, f);
  add_model_flags(cmp, f);
  add_train_flags(cmp, f);
  cmp->add_option("--models", f.models, "Hierarchy levels")->delimiter(',');
  cmp->add_option("--families", f.families, "Circuit families")->delimiter(',');
  cmp->add_option("--heads", f.heads, "Measurement heads")->delimiter(',');
  cmp->add_option("--lrs", f.lrs, "Learning rates")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  json cfg;
  try {
    cfg = build_config(command, f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string out = f.out.empty() ? "out/" + command : f.out;

  char* report = nullptr;
  const qsph_status st = qsph_run_command(command.c_str(), cfg.dump().c_str(), out.c_str(), &report);
  if (st != QSPH_OK) {
    std::cerr << "error: " << qsph_last_error() << "\n";
    return static_cast<int>(st);
  }
  json rep = json::parse(report);
  qsph_string_free(report);
  rep.erase("config");
  std::cout << rep.dump(2) << "\nartifacts written to " << out << "\n";
  return 0;
}
