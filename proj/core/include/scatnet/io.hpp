#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "scatnet/classify.hpp"
#include "scatnet/distribution.hpp"
#include "scatnet/network.hpp"

namespace scatnet::io {

/// 17-significant-digit decimal form; round-trips any finite double exactly.
std::string format_double(double v);
double parse_double(const std::string& token);

/// Shortest decimal form that round-trips; used for labels and reports.
std::string format_compact(double v);

/// Writes content to a temporary file in the target directory, then renames.
void atomic_write_text(const std::string& path, const std::string& content);

// -- model files (JSON; frame entries and blocks, blocks 1-based) ----------

void save_model(const std::string& path, const ScatteringNetwork& net);
ScatteringNetwork load_model(const std::string& path, bool validate = true);

// -- numeric datasets (CSV, one sample per row, no header) -----------------

Eigen::MatrixXd load_dataset(const std::string& path);
void save_dataset(const std::string& path, const Eigen::MatrixXd& rows);

struct LabeledDataset {
  Eigen::MatrixXd features;
  std::vector<double> labels;
};

/// Splits off the 1-based label column.
LabeledDataset split_label_column(const Eigen::MatrixXd& table, int label_col);

// -- class template files (JSON) --------------------------------------------

void save_templates(const std::string& path, const ClassTemplates& templates);
ClassTemplates load_templates(const std::string& path);

// -- synthetic distribution specs (JSON) ------------------------------------

struct SyntheticSpec {
  Mixture mixture;
  Eigen::Index count;
  bool labeled;  // emit the class label as the last column
};

SyntheticSpec load_distribution_spec(const std::string& path);

// -- transform layout sidecars ----------------------------------------------

struct LayoutEntry {
  Eigen::Index layer;
  Eigen::Index offset;  // 0-based first column of the chunk
  Eigen::Index length;
};

void save_layout(const std::string& path, const std::vector<LayoutEntry>& entries);

// -- block specs -------------------------------------------------------------

/// Per-layer block mini-language: "singleton", "full" or "size:k".
BlockPartition parse_block_spec(const std::string& spec, Eigen::Index n);

/// Comma-separated per-layer specs, one per dimension entry. An empty string
/// yields the default: singletons everywhere, one full block at the deepest
/// layer.
std::vector<BlockPartition> parse_blocks_list(const std::string& list,
                                              const std::vector<Eigen::Index>& dims);

}  // namespace scatnet::io
