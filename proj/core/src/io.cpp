#include "scatnet/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scatnet/error.hpp"

namespace scatnet::io {

namespace {

using nlohmann::json;

constexpr int kModelVersion = 1;
constexpr int kTemplatesVersion = 1;
constexpr double kFileProbTol = 1e-9;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return j;
}

std::vector<std::vector<Eigen::Index>> blocks_to_internal(const json& j,
                                                          const std::string& path) {
  std::vector<std::vector<Eigen::Index>> blocks;
  for (const auto& jb : j) {
    std::vector<Eigen::Index> block;
    for (const auto& k : jb) block.push_back(k.get<Eigen::Index>() - 1);
    blocks.push_back(std::move(block));
  }
  if (blocks.empty()) throw IoError(path + ": empty block list");
  return blocks;
}

json blocks_to_external(const BlockPartition& p) {
  json out = json::array();
  for (const auto& block : p.blocks()) {
    json jb = json::array();
    for (Eigen::Index k : block) jb.push_back(k + 1);
    out.push_back(std::move(jb));
  }
  return out;
}

json matrix_row_major(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

Eigen::MatrixXd matrix_from_row_major(const json& j, Eigen::Index rows,
                                      Eigen::Index cols, const std::string& what) {
  if (static_cast<Eigen::Index>(j.size()) != rows * cols)
    throw IoError(what + ": expected " + std::to_string(rows * cols) +
                  " entries, found " + std::to_string(j.size()));
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[idx++].get<double>();
  if (!m.allFinite()) throw IoError(what + ": non-finite entries");
  return m;
}

DiscreteDistribution dist_from_json(const json& j, const std::string& path) {
  if (!j.contains("atoms") || !j.contains("probs"))
    throw IoError(path + ": distribution needs \"atoms\" and \"probs\"");
  std::vector<Eigen::VectorXd> atoms;
  for (const auto& ja : j["atoms"]) {
    Eigen::VectorXd atom(static_cast<Eigen::Index>(ja.size()));
    Eigen::Index i = 0;
    for (const auto& v : ja) atom[i++] = v.get<double>();
    atoms.push_back(std::move(atom));
  }
  std::vector<double> probs = j["probs"].get<std::vector<double>>();
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) throw IoError(path + ": probabilities must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kFileProbTol)
    throw IoError(path + ": probabilities sum to " + format_compact(sum) +
                  ", expected 1");
  for (double& p : probs) p /= sum;
  try {
    return {std::move(atoms), std::move(probs)};
  } catch (const Error& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& token) {
  std::size_t begin = token.find_first_not_of(" \t\r");
  std::size_t end = token.find_last_not_of(" \t\r");
  if (begin == std::string::npos) throw IoError("empty numeric field");
  const std::string trimmed = token.substr(begin, end - begin + 1);
  const char* start = trimmed.c_str();
  char* stop = nullptr;
  const double v = std::strtod(start, &stop);
  if (stop != start + trimmed.size())
    throw IoError("not a number: '" + trimmed + "'");
  if (!std::isfinite(v)) throw IoError("non-finite value: '" + trimmed + "'");
  return v;
}

std::string format_compact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path);
}

void save_model(const std::string& path, const ScatteringNetwork& net) {
  json j;
  j["format"] = "scatnet-model";
  j["version"] = kModelVersion;
  j["depth"] = net.depth();
  json layers = json::array();
  for (const auto& layer : net.layers()) {
    json jl;
    jl["n_in"] = layer.op.n_in();
    jl["n_out"] = layer.op.n_out();
    jl["psi_real"] = matrix_row_major(layer.op.psi_real());
    jl["psi_imag"] = matrix_row_major(layer.op.psi_imag());
    jl["blocks"] = blocks_to_external(layer.partition);
    layers.push_back(std::move(jl));
  }
  j["layers"] = std::move(layers);
  j["final_blocks"] = blocks_to_external(net.final_partition());
  atomic_write_text(path, j.dump(1) + "\n");
}

ScatteringNetwork load_model(const std::string& path, bool validate) {
  const json j = read_json(path);
  if (j.value("format", "") != "scatnet-model")
    throw IoError(path + ": not a scatnet model file");
  if (j.value("version", -1) != kModelVersion)
    throw IoError(path + ": unsupported model version");

  std::vector<NetworkLayer> layers;
  for (const auto& jl : j.at("layers")) {
    const auto n_in = jl.at("n_in").get<Eigen::Index>();
    const auto n_out = jl.at("n_out").get<Eigen::Index>();
    TightFrameOperator op(
        matrix_from_row_major(jl.at("psi_real"), n_out, n_in, path + ": psi_real"),
        matrix_from_row_major(jl.at("psi_imag"), n_out, n_in, path + ": psi_imag"));
    BlockPartition partition(n_in, blocks_to_internal(jl.at("blocks"), path));
    layers.push_back({std::move(op), std::move(partition)});
  }
  if (layers.empty()) throw IoError(path + ": model has no layers");
  const Eigen::Index last = layers.back().op.n_out();

  ScatteringNetwork net(std::move(layers),
                        BlockPartition(last, blocks_to_internal(j.at("final_blocks"), path)));
  if (static_cast<Eigen::Index>(j.at("depth").get<int>()) != net.depth())
    throw IoError(path + ": depth field disagrees with the layer list");
  if (validate) net.validate();
  return net;
}

Eigen::MatrixXd load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(parse_double(cell));
      } catch (const IoError& e) {
        throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(rows.front().size()) + " columns, found " +
                    std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyInputError(path + ": no data rows");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  return m;
}

void save_dataset(const std::string& path, const Eigen::MatrixXd& rows) {
  std::string out;
  out.reserve(static_cast<std::size_t>(rows.size()) * 8);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(rows(i, c));
    }
    out += '\n';
  }
  atomic_write_text(path, out);
}

LabeledDataset split_label_column(const Eigen::MatrixXd& table, int label_col) {
  if (label_col < 1 || label_col > table.cols())
    throw IoError("label column " + std::to_string(label_col) +
                  " out of range 1.." + std::to_string(table.cols()));
  const Eigen::Index lc = label_col - 1;
  LabeledDataset out;
  out.features.resize(table.rows(), table.cols() - 1);
  out.labels.reserve(static_cast<std::size_t>(table.rows()));
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    Eigen::Index c_out = 0;
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
      if (c == lc) continue;
      out.features(i, c_out++) = table(i, c);
    }
    out.labels.push_back(table(i, lc));
  }
  return out;
}

void save_templates(const std::string& path, const ClassTemplates& templates) {
  json j;
  j["format"] = "scatnet-templates";
  j["version"] = kTemplatesVersion;
  json classes = json::array();
  for (const auto& c : templates.classes) {
    json jc;
    jc["label"] = c.label;
    jc["prior"] = c.prior;
    jc["count"] = c.sample_count;
    json layers = json::array();
    for (const auto& layer : c.layers) {
      json jl = json::array();
      for (Eigen::Index i = 0; i < layer.size(); ++i) jl.push_back(layer[i]);
      layers.push_back(std::move(jl));
    }
    jc["layers"] = std::move(layers);
    classes.push_back(std::move(jc));
  }
  j["classes"] = std::move(classes);
  atomic_write_text(path, j.dump(1) + "\n");
}

ClassTemplates load_templates(const std::string& path) {
  const json j = read_json(path);
  if (j.value("format", "") != "scatnet-templates")
    throw IoError(path + ": not a scatnet templates file");
  if (j.value("version", -1) != kTemplatesVersion)
    throw IoError(path + ": unsupported templates version");

  ClassTemplates out;
  for (const auto& jc : j.at("classes")) {
    ClassTemplate c;
    c.label = jc.at("label").get<double>();
    c.prior = jc.at("prior").get<double>();
    c.sample_count = jc.at("count").get<Eigen::Index>();
    for (const auto& jl : jc.at("layers")) {
      Eigen::VectorXd layer(static_cast<Eigen::Index>(jl.size()));
      Eigen::Index i = 0;
      for (const auto& v : jl) layer[i++] = v.get<double>();
      c.layers.push_back(std::move(layer));
    }
    out.classes.push_back(std::move(c));
  }
  if (out.classes.empty()) throw IoError(path + ": no classes");
  return out;
}

SyntheticSpec load_distribution_spec(const std::string& path) {
  const json j = read_json(path);
  const Eigen::Index count = j.value("count", Eigen::Index(100));
  if (count < 1) throw IoError(path + ": count must be positive");

  if (j.contains("classes")) {
    std::vector<MixtureComponent> components;
    double prior_sum = 0.0;
    for (const auto& jc : j["classes"]) {
      MixtureComponent c{jc.value("label", 0.0), jc.value("prior", 0.0),
                         dist_from_json(jc, path)};
      if (!(c.prior > 0.0)) throw IoError(path + ": class priors must be positive");
      prior_sum += c.prior;
      components.push_back(std::move(c));
    }
    if (std::abs(prior_sum - 1.0) > kFileProbTol)
      throw IoError(path + ": class priors sum to " + format_compact(prior_sum) +
                    ", expected 1");
    for (auto& c : components) c.prior /= prior_sum;
    return {Mixture(std::move(components)), count, true};
  }

  std::vector<MixtureComponent> single;
  single.push_back({0.0, 1.0, dist_from_json(j, path)});
  return {Mixture(std::move(single)), count, false};
}

void save_layout(const std::string& path, const std::vector<LayoutEntry>& entries) {
  std::string out = "layer,offset,length\n";
  for (const auto& e : entries)
    out += std::to_string(e.layer) + "," + std::to_string(e.offset) + "," +
           std::to_string(e.length) + "\n";
  atomic_write_text(path, out);
}

BlockPartition parse_block_spec(const std::string& spec, Eigen::Index n) {
  if (spec == "singleton") return BlockPartition::singletons(n);
  if (spec == "full") return BlockPartition::full(n);
  if (spec.rfind("size:", 0) == 0) {
    const std::string num = spec.substr(5);
    Eigen::Index size = 0;
    const auto res = std::from_chars(num.data(), num.data() + num.size(), size);
    if (res.ec != std::errc() || res.ptr != num.data() + num.size() || size < 1)
      throw IoError("bad block size in spec '" + spec + "'");
    return BlockPartition::contiguous(n, size);
  }
  throw IoError("unknown block spec '" + spec +
                "' (expected singleton, full or size:k)");
}

std::vector<BlockPartition> parse_blocks_list(const std::string& list,
                                              const std::vector<Eigen::Index>& dims) {
  std::vector<BlockPartition> out;
  if (list.empty()) {
    for (std::size_t m = 0; m < dims.size(); ++m)
      out.push_back(m + 1 == dims.size() ? BlockPartition::full(dims[m])
                                         : BlockPartition::singletons(dims[m]));
    return out;
  }
  std::vector<std::string> specs;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) specs.push_back(item);
  if (specs.size() != dims.size())
    throw IoError("expected " + std::to_string(dims.size()) +
                  " block specs, got " + std::to_string(specs.size()));
  for (std::size_t m = 0; m < dims.size(); ++m)
    out.push_back(parse_block_spec(specs[m], dims[m]));
  return out;
}

}  // namespace scatnet::io
