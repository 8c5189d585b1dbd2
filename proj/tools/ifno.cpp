#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ifno/checks.hpp"
#include "ifno/io.hpp"

namespace {

ifno::Variant parse_variant(const std::string& v) {
  if (v == "standard") return ifno::Variant::standard;
  if (v == "iso" || v == "isotropic") return ifno::Variant::isotropic;
  throw CLI::ValidationError("--variant", "must be 'standard' or 'iso'");
}

ifno::GroupElement parse_transform(const std::string& t) {
  using ifno::GroupElement;
  if (t == "none") return GroupElement::identity;
  if (t == "flip-x") return GroupElement::flip_x;
  if (t == "flip-y") return GroupElement::flip_y;
  if (t == "transpose") return GroupElement::transpose;
  if (t == "rot90") return GroupElement::rot90;
  throw CLI::ValidationError("--transform", "unknown transform: " + t);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier neural operator with a D4-symmetric kernel variant: data generation, "
               "training, evaluation, and verification suites"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a Darcy-flow dataset");
  int gen_count = 200, gen_res = 64;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--count", gen_count, "Number of samples")->required();
  gen->add_option("--resolution", gen_res, "Grid resolution (power of two)")->required();
  gen->add_option("--seed", gen_seed, "Base seed; sample i uses seed+i");
  gen->add_option("--out", gen_out, "Output dataset file")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train a model on a dataset");
  std::string tr_data, tr_test, tr_variant = "standard", tr_out, tr_csv;
  int tr_modes = 16, tr_width = 32, tr_layers = 4, tr_epochs = 100, tr_batch = 20;
  double tr_lr = 1e-3;
  std::uint64_t tr_seed = 0;
  tr->add_option("--data", tr_data, "Training dataset file")->required();
  tr->add_option("--test", tr_test, "Test dataset file")->required();
  tr->add_option("--variant", tr_variant, "standard | iso");
  tr->add_option("--modes", tr_modes, "Retained modes per axis");
  tr->add_option("--width", tr_width, "Lifted channel count");
  tr->add_option("--layers", tr_layers, "Fourier layer count");
  tr->add_option("--epochs", tr_epochs, "Training epochs");
  tr->add_option("--batch", tr_batch, "Batch size");
  tr->add_option("--lr", tr_lr, "Initial learning rate");
  tr->add_option("--seed", tr_seed, "Training seed");
  tr->add_option("--out", tr_out, "Checkpoint output file")->required();
  tr->add_option("--metrics-csv", tr_csv, "Per-epoch metrics CSV output");

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  std::string ev_model, ev_data, ev_transform = "none", ev_csv;
  ev->add_option("--model", ev_model, "Checkpoint file")->required();
  ev->add_option("--data", ev_data, "Dataset file")->required();
  ev->add_option("--transform", ev_transform, "none | flip-x | flip-y | transpose | rot90");
  ev->add_option("--out-csv", ev_csv, "Per-sample metrics CSV output");

  // params
  auto* pr = app.add_subcommand("params", "Print the exact parameter count");
  std::string pr_variant = "standard";
  int pr_modes = 16, pr_width = 32, pr_layers = 4;
  pr->add_option("--variant", pr_variant, "standard | iso");
  pr->add_option("--modes", pr_modes, "Retained modes per axis");
  pr->add_option("--width", pr_width, "Lifted channel count");
  pr->add_option("--layers", pr_layers, "Fourier layer count");

  // predict
  auto* pd = app.add_subcommand("predict", "Export one sample's input, truth, and prediction");
  std::string pd_model, pd_data, pd_csv;
  int pd_index = 0;
  pd->add_option("--model", pd_model, "Checkpoint file")->required();
  pd->add_option("--data", pd_data, "Dataset file")->required();
  pd->add_option("--index", pd_index, "Sample index")->required();
  pd->add_option("--out-csv", pd_csv, "Output CSV")->required();

  // check
  auto* ck = app.add_subcommand("check", "Run a verification suite");
  std::string ck_suite;
  ck->add_option("--suite", ck_suite, "fft | symmetry | equivariance | gradcheck | darcy")
      ->required()
      ->check(CLI::IsMember({"fft", "symmetry", "equivariance", "gradcheck", "darcy"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*gen) {
      auto samples = ifno::generate_dataset(gen_count, gen_seed, gen_res);
      ifno::write_dataset(gen_out, samples);
      std::cout << "wrote " << samples.size() << " samples (" << gen_res << "x" << gen_res
                << ") to " << gen_out << "\n";
    } else if (*tr) {
      ifno::ModelConfig mcfg;
      mcfg.variant = parse_variant(tr_variant);
      mcfg.modes = tr_modes;
      mcfg.width = tr_width;
      mcfg.layers = tr_layers;
      ifno::TrainConfig tcfg;
      tcfg.epochs = tr_epochs;
      tcfg.batch_size = tr_batch;
      tcfg.lr0 = tr_lr;
      tcfg.seed = tr_seed;
      auto train_set = ifno::read_dataset(tr_data);
      auto test_set = ifno::read_dataset(tr_test);
      ifno::TrainResult result = ifno::train(tcfg, mcfg, train_set, test_set, &std::cout);
      ifno::write_checkpoint(tr_out, mcfg, result.params);
      if (!tr_csv.empty()) ifno::write_metrics_csv(tr_csv, result.history);
      std::cout << "wrote checkpoint to " << tr_out << "\n";
    } else if (*ev) {
      auto [cfg, params] = ifno::read_checkpoint(ev_model);
      auto data = ifno::read_dataset(ev_data);
      const ifno::MetricReport rep =
          ifno::dataset_report(cfg, params, data, parse_transform(ev_transform));
      std::cout << "mean_l2 " << rep.mean_l2 << "\nmean_h2 " << rep.mean_h2 << "\n";
      if (!ev_csv.empty()) ifno::write_eval_csv(ev_csv, rep);
    } else if (*pr) {
      ifno::ModelConfig cfg;
      cfg.variant = parse_variant(pr_variant);
      cfg.modes = pr_modes;
      cfg.width = pr_width;
      cfg.layers = pr_layers;
      std::cout << "total " << ifno::count_parameters(cfg) << "\nspectral "
                << ifno::spectral_parameter_count(cfg) << "\n";
    } else if (*pd) {
      auto [cfg, params] = ifno::read_checkpoint(pd_model);
      auto data = ifno::read_dataset(pd_data);
      if (pd_index < 0 || pd_index >= static_cast<int>(data.size())) {
        std::cerr << "sample index " << pd_index << " out of range (dataset has " << data.size()
                  << " samples)\n";
        return 2;
      }
      const ifno::DarcySample& s = data[pd_index];
      const ifno::ChannelField pred =
          ifno::forward(cfg, params, ifno::ChannelField::from_grid(s.a));
      std::ofstream out(pd_csv);
      if (!out) throw std::runtime_error("cannot open " + pd_csv);
      out.precision(17);
      out << "# a\n";
      ifno::write_grid_csv(out, s.a);
      out << "# truth\n";
      ifno::write_grid_csv(out, s.u);
      out << "# prediction\n";
      ifno::write_grid_csv(out, pred.channel_copy(0));
    } else if (*ck) {
      return ifno::run_suite(ck_suite, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
