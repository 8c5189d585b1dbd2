#pragma once

#include <string>

#include "ifno/metrics.hpp"
#include "ifno/train.hpp"

namespace ifno {

/// Dataset file: magic "IFNO", u32 version, u32 count, u32 height, u32 width,
/// then per sample the a-field followed by the u-field, each as row-major
/// float64. All integers and floats are little-endian.
void write_dataset(const std::string& path, const std::vector<DarcySample>& samples);
std::vector<DarcySample> read_dataset(const std::string& path);

/// Checkpoint file: magic "IFNC", u32 version, u32 variant tag, u32 width,
/// u32 modes, u32 layers, u32 in_channels, u32 out_channels,
/// u32 projection_hidden, 4 x f64 normalization scalars, u64 parameter count,
/// then the flat float64 parameter vector in canonical layout order.
void write_checkpoint(const std::string& path, const ModelConfig& cfg,
                      const ModelParameters& params);
std::pair<ModelConfig, ModelParameters> read_checkpoint(const std::string& path);

/// Per-epoch metrics table: "epoch,train_l2,test_l2,train_h2,test_h2".
void write_metrics_csv(const std::string& path, const std::vector<EpochMetrics>& history);

/// Per-sample report: "sample,l2,h2" rows plus a final "mean" row.
void write_eval_csv(const std::string& path, const MetricReport& report);

/// A single grid as H rows of comma-separated values.
void write_grid_csv(std::ostream& os, const ScalarGrid& g);

}  // namespace ifno
