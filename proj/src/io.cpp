#include "ifno/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are unsupported");

namespace ifno {
namespace {

struct Reader {
  std::ifstream in;
  std::string path;
  std::uint64_t offset = 0;

  explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) throw std::runtime_error("cannot open " + p);
  }

  void bytes(void* dst, std::size_t n) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
      throw std::runtime_error(path + ": truncated at byte offset " + std::to_string(offset));
    }
    offset += n;
  }

  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, sizeof v);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    bytes(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    bytes(&v, sizeof v);
    return v;
  }

  void expect_magic(const char (&magic)[5]) {
    char buf[4];
    bytes(buf, 4);
    if (std::memcmp(buf, magic, 4) != 0) {
      throw std::runtime_error(path + ": bad magic at byte offset 0, expected \"" +
                               std::string(magic, 4) + "\"");
    }
  }
};

struct Writer {
  std::ofstream out;
  std::string path;

  explicit Writer(const std::string& p) : out(p, std::ios::binary), path(p) {
    if (!out) throw std::runtime_error("cannot open " + p + " for writing");
  }

  void bytes(const void* src, std::size_t n) {
    out.write(static_cast<const char*>(src), static_cast<std::streamsize>(n));
  }
  void u32(std::uint32_t v) { bytes(&v, sizeof v); }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { bytes(&v, sizeof v); }

  void close() {
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path);
  }
};

constexpr std::uint32_t kDatasetVersion = 1;
constexpr std::uint32_t kCheckpointVersion = 1;

void write_grid(Writer& w, const ScalarGrid& g) {
  w.bytes(g.data(), sizeof(double) * g.size());  // row-major storage
}

ScalarGrid read_grid(Reader& r, int h, int wdt) {
  ScalarGrid g(h, wdt);
  r.bytes(g.data(), sizeof(double) * g.size());
  return g;
}

}  // namespace

void write_dataset(const std::string& path, const std::vector<DarcySample>& samples) {
  if (samples.empty()) throw std::invalid_argument("write_dataset: no samples");
  const auto h = static_cast<std::uint32_t>(samples.front().a.rows());
  const auto w = static_cast<std::uint32_t>(samples.front().a.cols());
  for (const DarcySample& s : samples) {
    if (s.a.rows() != h || s.a.cols() != w || s.u.rows() != h || s.u.cols() != w) {
      throw std::invalid_argument("write_dataset: inconsistent sample shapes");
    }
  }
  Writer out(path);
  out.bytes("IFNO", 4);
  out.u32(kDatasetVersion);
  out.u32(static_cast<std::uint32_t>(samples.size()));
  out.u32(h);
  out.u32(w);
  for (const DarcySample& s : samples) {
    write_grid(out, s.a);
    write_grid(out, s.u);
  }
  out.close();
}

std::vector<DarcySample> read_dataset(const std::string& path) {
  Reader in(path);
  in.expect_magic("IFNO");
  const std::uint32_t version = in.u32();
  if (version != kDatasetVersion) {
    throw std::runtime_error(path + ": unsupported dataset version " + std::to_string(version));
  }
  const std::uint32_t count = in.u32();
  const int h = static_cast<int>(in.u32());
  const int w = static_cast<int>(in.u32());
  std::vector<DarcySample> samples;
  samples.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    DarcySample s;
    s.a = read_grid(in, h, w);
    s.u = read_grid(in, h, w);
    samples.push_back(std::move(s));
  }
  char extra;
  if (in.in.read(&extra, 1); in.in.gcount() != 0) {
    throw std::runtime_error(path + ": trailing bytes after declared payload at offset " +
                             std::to_string(in.offset));
  }
  return samples;
}

void write_checkpoint(const std::string& path, const ModelConfig& cfg,
                      const ModelParameters& params) {
  if (params.values.size() != count_parameters(cfg)) {
    throw std::invalid_argument("write_checkpoint: parameter count does not match config");
  }
  Writer out(path);
  out.bytes("IFNC", 4);
  out.u32(kCheckpointVersion);
  out.u32(cfg.variant == Variant::standard ? 0 : 1);
  out.u32(static_cast<std::uint32_t>(cfg.width));
  out.u32(static_cast<std::uint32_t>(cfg.modes));
  out.u32(static_cast<std::uint32_t>(cfg.layers));
  out.u32(static_cast<std::uint32_t>(cfg.in_channels));
  out.u32(static_cast<std::uint32_t>(cfg.out_channels));
  out.u32(static_cast<std::uint32_t>(cfg.projection_hidden));
  out.f64(params.norm.in_mean);
  out.f64(params.norm.in_std);
  out.f64(params.norm.out_mean);
  out.f64(params.norm.out_std);
  out.u64(static_cast<std::uint64_t>(params.values.size()));
  out.bytes(params.values.data(), sizeof(double) * params.values.size());
  out.close();
}

std::pair<ModelConfig, ModelParameters> read_checkpoint(const std::string& path) {
  Reader in(path);
  in.expect_magic("IFNC");
  const std::uint32_t version = in.u32();
  if (version != kCheckpointVersion) {
    throw std::runtime_error(path + ": unsupported checkpoint version " +
                             std::to_string(version));
  }
  ModelConfig cfg;
  const std::uint32_t tag = in.u32();
  if (tag > 1) throw std::runtime_error(path + ": unknown variant tag " + std::to_string(tag));
  cfg.variant = tag == 0 ? Variant::standard : Variant::isotropic;
  cfg.width = static_cast<int>(in.u32());
  cfg.modes = static_cast<int>(in.u32());
  cfg.layers = static_cast<int>(in.u32());
  cfg.in_channels = static_cast<int>(in.u32());
  cfg.out_channels = static_cast<int>(in.u32());
  cfg.projection_hidden = static_cast<int>(in.u32());
  ModelParameters p;
  p.norm.in_mean = in.f64();
  p.norm.in_std = in.f64();
  p.norm.out_mean = in.f64();
  p.norm.out_std = in.f64();
  const std::uint64_t n = in.u64();
  if (n != static_cast<std::uint64_t>(count_parameters(cfg))) {
    throw std::runtime_error(path + ": parameter count " + std::to_string(n) +
                             " does not match the stored config (expected " +
                             std::to_string(count_parameters(cfg)) + ")");
  }
  p.values.resize(static_cast<Eigen::Index>(n));
  in.bytes(p.values.data(), sizeof(double) * n);
  return {cfg, std::move(p)};
}

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_metrics_csv(const std::string& path, const std::vector<EpochMetrics>& history) {
  std::ofstream out = open_csv(path);
  out << "epoch,train_l2,test_l2,train_h2,test_h2\n";
  for (std::size_t e = 0; e < history.size(); ++e) {
    out << e + 1 << "," << history[e].train_l2 << "," << history[e].test_l2 << ","
        << history[e].train_h2 << "," << history[e].test_h2 << "\n";
  }
}

void write_eval_csv(const std::string& path, const MetricReport& report) {
  std::ofstream out = open_csv(path);
  out << "sample,l2,h2\n";
  for (std::size_t i = 0; i < report.l2.size(); ++i) {
    out << i << "," << report.l2[i] << "," << report.h2[i] << "\n";
  }
  out << "mean," << report.mean_l2 << "," << report.mean_h2 << "\n";
}

void write_grid_csv(std::ostream& os, const ScalarGrid& g) {
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      os << g(i, j) << (j + 1 == g.cols() ? '\n' : ',');
    }
  }
}

}  // namespace ifno
