#include <charconv>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scatnet/scatnet.hpp"

namespace {

using namespace scatnet;

std::vector<Eigen::Index> parse_dims(const std::string& text) {
  std::vector<Eigen::Index> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Eigen::Index v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size() || v < 1)
      throw IoError("--dims: '" + item + "' is not a positive integer");
    dims.push_back(v);
  }
  if (dims.size() < 2)
    throw IoError("--dims needs at least two comma-separated widths");
  return dims;
}

std::vector<Eigen::VectorXd> rows_to_samples(const Eigen::MatrixXd& table) {
  std::vector<Eigen::VectorXd> samples;
  samples.reserve(static_cast<std::size_t>(table.rows()));
  for (Eigen::Index i = 0; i < table.rows(); ++i)
    samples.push_back(table.row(i).transpose());
  return samples;
}

struct InitOptions {
  std::string dims;
  std::string scheme = "random";
  std::string blocks;
  std::uint64_t seed = 0;
  std::string out;
};

int run_init(const InitOptions& o) {
  const auto dims = parse_dims(o.dims);
  auto partitions = io::parse_blocks_list(o.blocks, dims);

  std::vector<NetworkLayer> layers;
  for (std::size_t m = 0; m + 1 < dims.size(); ++m) {
    const Eigen::Index n_in = dims[m];
    const Eigen::Index n_out = dims[m + 1];
    if (o.scheme == "pairing") {
      if (n_in % 2 != 0 || n_out != n_in / 2)
        throw DimensionError("layer " + std::to_string(m + 1) +
                             ": pairing needs an even input width halved at the "
                             "output, got " + std::to_string(n_in) + " -> " +
                             std::to_string(n_out));
      std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
      for (Eigen::Index k = 0; k < n_in; k += 2) pairs.emplace_back(k, k + 1);
      layers.push_back({pairing_operator(n_in, pairs), partitions[m]});
    } else {
      if (2 * n_out < n_in)
        throw DimensionError("layer " + std::to_string(m + 1) + ": width " +
                             std::to_string(n_out) + " is too small for input width " +
                             std::to_string(n_in) + " (need 2*n_out >= n_in)");
      layers.push_back({random_tight_frame(n_in, n_out, derive_seed(o.seed, m)),
                        partitions[m]});
    }
  }

  ScatteringNetwork net(std::move(layers), partitions.back());
  io::save_model(o.out, net);
  std::cout << "wrote " << o.out << " (depth " << net.depth() << ")\n";
  return 0;
}

struct TrainOptions {
  std::string data;
  std::string dims;
  std::string blocks;
  int max_iters = 500;
  double step = 1.0;
  double shrink = 0.5;
  double eps = 1e-6;
  std::uint64_t seed = 0;
  std::string out;
};

int run_train(const TrainOptions& o) {
  const auto dims = parse_dims(o.dims);
  const auto table = io::load_dataset(o.data);
  if (table.cols() != dims[0])
    throw DimensionError("data has " + std::to_string(table.cols()) +
                         " columns but --dims starts at " + std::to_string(dims[0]));
  auto partitions = io::parse_blocks_list(o.blocks, dims);

  OptimizerConfig config;
  config.max_iters = o.max_iters;
  config.step_size = o.step;
  config.shrink_factor = o.shrink;
  config.smoothing_eps = o.eps;

  const auto result =
      build_network_greedy(rows_to_samples(table), dims, partitions, config, o.seed);
  for (std::size_t m = 0; m < result.layer_traces.size(); ++m) {
    std::cout << "layer " << m + 1 << " objective trace:";
    for (double v : result.layer_traces[m]) std::cout << ' ' << io::format_compact(v);
    std::cout << "\n";
  }
  io::save_model(o.out, result.net);
  std::cout << "wrote " << o.out << "\n";
  return 0;
}

struct TransformOptions {
  std::string model;
  std::string data;
  std::string out;
  std::string emit = "autilde";
};

int run_transform(const TransformOptions& o) {
  const auto net = io::load_model(o.model);
  const auto table = io::load_dataset(o.data);
  if (table.cols() != net.dim(0))
    throw DimensionError("data has " + std::to_string(table.cols()) +
                         " columns but the model expects " +
                         std::to_string(net.dim(0)));
  const bool averaged = o.emit == "autilde";
  if (!averaged && o.emit != "utilde")
    throw IoError("--emit must be autilde or utilde");

  std::vector<io::LayoutEntry> layout;
  Eigen::Index width = 0;
  for (Eigen::Index m = 0; m <= net.depth(); ++m) {
    layout.push_back({m, width, net.dim(m)});
    width += net.dim(m);
  }

  Eigen::MatrixXd out(table.rows(), width);
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    const auto s = averaged_scatter(net, table.row(i).transpose());
    out.row(i) = concatenate(averaged ? s.output : s.tilde).transpose();
  }
  io::save_dataset(o.out, out);
  io::save_layout(o.out + ".layout", layout);
  std::cout << "wrote " << o.out << " and " << o.out << ".layout\n";
  return 0;
}

struct FitClassesOptions {
  std::string model;
  std::string data;
  int label_col = 0;
  std::string out;
};

int run_fit_classes(const FitClassesOptions& o) {
  const auto net = io::load_model(o.model);
  const auto table = io::load_dataset(o.data);
  const auto labeled = io::split_label_column(table, o.label_col);
  if (labeled.features.cols() != net.dim(0))
    throw DimensionError("data has " + std::to_string(labeled.features.cols()) +
                         " feature columns but the model expects " +
                         std::to_string(net.dim(0)));
  const auto templates =
      fit_templates(net, rows_to_samples(labeled.features), labeled.labels);
  io::save_templates(o.out, templates);
  for (const auto& c : templates.classes)
    std::cout << "class " << io::format_compact(c.label) << ": " << c.sample_count
              << " samples, prior " << io::format_compact(c.prior) << "\n";
  std::cout << "wrote " << o.out << "\n";
  return 0;
}

struct ClassifyOptions {
  std::string model;
  std::string templates;
  std::string data;
  int label_col = 0;
  std::string out;
};

int run_classify(const ClassifyOptions& o) {
  const auto net = io::load_model(o.model);
  const auto templates = io::load_templates(o.templates);
  const auto table = io::load_dataset(o.data);

  Eigen::MatrixXd features = table;
  std::vector<double> labels;
  if (o.label_col > 0) {
    auto labeled = io::split_label_column(table, o.label_col);
    features = std::move(labeled.features);
    labels = std::move(labeled.labels);
  }
  if (features.cols() != net.dim(0))
    throw DimensionError("data has " + std::to_string(features.cols()) +
                         " feature columns but the model expects " +
                         std::to_string(net.dim(0)));
  if (!labels.empty()) {
    for (double label : labels) {
      const bool known = std::any_of(
          templates.classes.begin(), templates.classes.end(),
          [&](const ClassTemplate& c) { return c.label == label; });
      if (!known)
        throw IoError("label " + io::format_compact(label) +
                      " is not present in the templates file");
    }
  }

  std::string predictions;
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const auto result = classify_nearest(net, templates, features.row(i).transpose());
    predictions += io::format_compact(result.label) + "\n";
    if (!labels.empty() && result.label == labels[static_cast<std::size_t>(i)])
      ++correct;
  }
  io::atomic_write_text(o.out, predictions);
  if (!labels.empty())
    std::cout << "accuracy "
              << io::format_compact(static_cast<double>(correct) /
                                    static_cast<double>(features.rows()))
              << "\n";
  std::cout << "wrote " << o.out << "\n";
  return 0;
}

struct GenOptions {
  std::string spec;
  Eigen::Index count = 0;  // 0: use the spec's count
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen_synthetic(const GenOptions& o) {
  const auto spec = io::load_distribution_spec(o.spec);
  const Eigen::Index count = o.count > 0 ? o.count : spec.count;
  auto rng = make_rng(o.seed);

  Eigen::MatrixXd table;
  if (spec.labeled) {
    const auto [samples, labels] = spec.mixture.draw_labeled(rng, count);
    table.resize(count, spec.mixture.dim() + 1);
    for (Eigen::Index i = 0; i < count; ++i) {
      table.row(i).head(spec.mixture.dim()) = samples[static_cast<std::size_t>(i)];
      table(i, spec.mixture.dim()) = labels[static_cast<std::size_t>(i)];
    }
  } else {
    const auto samples = spec.mixture.pooled().draw(rng, count);
    table.resize(count, spec.mixture.dim());
    for (Eigen::Index i = 0; i < count; ++i)
      table.row(i) = samples[static_cast<std::size_t>(i)].transpose();
  }
  io::save_dataset(o.out, table);
  std::cout << "wrote " << o.out << " (" << count << " rows)\n";
  return 0;
}

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::string level = "quick";
  std::string model;
};

int run_verify(const VerifyOptions& o) {
  verify::Report report;
  if (!o.model.empty()) {
    const auto net = io::load_model(o.model, /*validate=*/false);
    report = verify::run_model_suite(net, o.seed);
  } else {
    if (o.level != "quick" && o.level != "full")
      throw IoError("--level must be quick or full");
    report = verify::run_suite(
        o.seed, o.level == "full" ? verify::Level::full : verify::Level::quick);
  }
  for (const auto& p : report.properties)
    std::cout << verify::format_property_line(p) << "\n";
  for (const auto& line : report.info) std::cout << "# " << line << "\n";
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scattering networks with l2 pooling"};
  app.require_subcommand(1);

  InitOptions init_opts;
  auto* cmd_init = app.add_subcommand("init", "create a model with fixed operators");
  cmd_init->add_option("--dims", init_opts.dims, "layer widths d0,d1,...,dM")->required();
  cmd_init->add_option("--scheme", init_opts.scheme, "pairing or random")
      ->check(CLI::IsMember({"pairing", "random"}));
  cmd_init->add_option("--blocks", init_opts.blocks,
                       "per-layer block specs (singleton|full|size:k)");
  cmd_init->add_option("--seed", init_opts.seed, "random seed");
  cmd_init->add_option("--out", init_opts.out, "output model file")->required();

  TrainOptions train_opts;
  auto* cmd_train =
      app.add_subcommand("train-unsup", "greedy layerwise unsupervised training");
  cmd_train->add_option("--data", train_opts.data, "training samples CSV")->required();
  cmd_train->add_option("--dims", train_opts.dims, "layer widths d0,d1,...,dM")->required();
  cmd_train->add_option("--blocks", train_opts.blocks, "per-layer block specs");
  cmd_train->add_option("--max-iters", train_opts.max_iters, "descent iterations per layer");
  cmd_train->add_option("--step", train_opts.step, "initial step size");
  cmd_train->add_option("--shrink", train_opts.shrink, "backtracking shrink factor");
  cmd_train->add_option("--eps", train_opts.eps, "modulus smoothing for gradients");
  cmd_train->add_option("--seed", train_opts.seed, "random seed");
  cmd_train->add_option("--out", train_opts.out, "output model file")->required();

  TransformOptions tf_opts;
  auto* cmd_transform = app.add_subcommand("transform", "scatter samples through a model");
  cmd_transform->add_option("--model", tf_opts.model, "model file")->required();
  cmd_transform->add_option("--data", tf_opts.data, "samples CSV")->required();
  cmd_transform->add_option("--out", tf_opts.out, "output CSV")->required();
  cmd_transform->add_option("--emit", tf_opts.emit, "autilde (block averages) or utilde")
      ->check(CLI::IsMember({"autilde", "utilde"}));

  FitClassesOptions fit_opts;
  auto* cmd_fit = app.add_subcommand("fit-classes", "fit per-class scattering templates");
  cmd_fit->add_option("--model", fit_opts.model, "model file")->required();
  cmd_fit->add_option("--data", fit_opts.data, "labeled samples CSV")->required();
  cmd_fit->add_option("--label-col", fit_opts.label_col, "1-based label column")->required();
  cmd_fit->add_option("--out", fit_opts.out, "output templates file")->required();

  ClassifyOptions cls_opts;
  auto* cmd_classify = app.add_subcommand("classify", "nearest-template classification");
  cmd_classify->add_option("--model", cls_opts.model, "model file")->required();
  cmd_classify->add_option("--templates", cls_opts.templates, "templates file")->required();
  cmd_classify->add_option("--data", cls_opts.data, "samples CSV")->required();
  cmd_classify->add_option("--label-col", cls_opts.label_col,
                           "1-based label column (enables accuracy)");
  cmd_classify->add_option("--out", cls_opts.out, "predictions file")->required();

  GenOptions gen_opts;
  auto* cmd_gen = app.add_subcommand("gen-synthetic", "sample a finite-support mixture");
  cmd_gen->add_option("--spec", gen_opts.spec, "distribution spec JSON")->required();
  cmd_gen->add_option("--count", gen_opts.count, "number of samples (overrides the spec)");
  cmd_gen->add_option("--seed", gen_opts.seed, "random seed");
  cmd_gen->add_option("--out", gen_opts.out, "output CSV")->required();

  VerifyOptions verify_opts;
  auto* cmd_verify = app.add_subcommand("verify", "run the invariant suite");
  cmd_verify->add_option("--seed", verify_opts.seed, "random seed");
  cmd_verify->add_option("--level", verify_opts.level, "quick or full");
  cmd_verify->add_option("--model", verify_opts.model,
                         "check this model instead of random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_init->parsed()) return run_init(init_opts);
    if (cmd_train->parsed()) return run_train(train_opts);
    if (cmd_transform->parsed()) return run_transform(tf_opts);
    if (cmd_fit->parsed()) return run_fit_classes(fit_opts);
    if (cmd_classify->parsed()) return run_classify(cls_opts);
    if (cmd_gen->parsed()) return run_gen_synthetic(gen_opts);
    if (cmd_verify->parsed()) return run_verify(verify_opts);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
