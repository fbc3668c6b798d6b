#include "dvlae/cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "csv.hpp"
#include "dvlae/config.hpp"
#include "dvlae/embedding.hpp"
#include "dvlae/error.hpp"
#include "dvlae/fingerprint.hpp"
#include "dvlae/output.hpp"
#include "dvlae/plot.hpp"
#include "dvlae/screening.hpp"
#include "dvlae/structure.hpp"

namespace dvlae::cli {

namespace fs = std::filesystem;

std::vector<std::string> read_id_list(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> ids;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    ids.push_back(line.substr(first, last - first + 1));
  }
  return ids;
}

std::string write_id_list(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += id + "\n";
  return out;
}

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

RunConfig load(const Common& common) {
  if (common.config.empty()) throw Error("--config is required");
  RunConfig cfg = load_config(common.config);
  if (!common.out.empty()) cfg.out_dir = common.out;
  if (common.seed) {
    cfg.seed = *common.seed;
    cfg.tsne.seed = *common.seed;
  }
  return cfg;
}

Dataset load_structures(RunConfig& cfg) {
  const auto files = cfg.dataset_files();
  if (files.empty()) throw Error("config: no structure files (set data.manifest or data.files)");
  Dataset ds = load_dataset(files, cfg.path.parent_path());
  if (cfg.subset) {
    const auto keep_list = read_id_list(*cfg.subset);
    const std::set<std::string> keep(keep_list.begin(), keep_list.end());
    std::vector<Structure> kept;
    for (auto& s : ds.structures) {
      if (keep.count(s.id)) kept.push_back(std::move(s));
    }
    ds = Dataset::from_structures(std::move(kept));
  }
  if (cfg.elements.empty()) {
    cfg.elements = ds.elements;
  } else {
    for (const auto& e : ds.elements) {
      if (std::find(cfg.elements.begin(), cfg.elements.end(), e) == cfg.elements.end()) {
        throw Error("element '" + e + "' occurs in the dataset but not in data.elements");
      }
    }
  }
  return ds;
}

Structure pick_reference(const RunConfig& cfg, const Dataset& ds) {
  switch (cfg.reference.kind) {
    case ReferenceSelector::Kind::Id: {
      const Structure* s = ds.find(cfg.reference.value);
      if (s == nullptr) throw Error("reference id '" + cfg.reference.value + "' is not in the dataset");
      return *s;
    }
    case ReferenceSelector::Kind::Path: {
      Dataset ref = read_extxyz_file(cfg.reference.value);
      if (ref.structures.empty()) throw Error("reference file '" + cfg.reference.value + "' is empty");
      return ref.structures.front();
    }
    case ReferenceSelector::Kind::Auto:
      break;
  }
  const Structure* s = auto_reference(ds);
  if (s == nullptr) throw Error("no structure in the dataset contains every element; set reference.select");
  return *s;
}

void check_spec_matches(const HistogramSpec& spec, RunConfig& cfg) {
  if (cfg.elements.empty()) {
    for (const auto& g : spec.layout) cfg.elements.push_back(g.element);
  }
  const SymmetryFunctionSet sfset = cfg.symmetry_functions();
  if (spec.bins != cfg.bins || spec.comparison != cfg.comparison ||
      spec.descriptor_hash != descriptor_hash(sfset)) {
    throw Error("fingerprint spec does not match the configuration (bins, comparison or descriptors differ)");
  }
}

int cmd_fingerprint(const Common& common, const std::string& spec_path, std::ostream& out) {
  RunConfig cfg = load(common);
  const Dataset ds = load_structures(cfg);
  const SymmetryFunctionSet sfset = cfg.symmetry_functions();

  FingerprintSet set;
  if (!spec_path.empty()) {
    set.spec = read_spec_file(read_file(spec_path));
    check_spec_matches(set.spec.histogram, cfg);
    set.fingerprints = fingerprints_with_spec(ds, sfset, set.spec);
  } else {
    const Structure ref = pick_reference(cfg, ds);
    set = batch_fingerprints(ds, ref, sfset, cfg.bins, cfg.comparison);
  }

  OutputTransaction tx;
  const fs::path fp_path = cfg.out_dir / "fingerprints.dvf";
  tx.stage(fp_path, write_fingerprint_file(set));
  tx.stage(cfg.out_dir / "spec.dvs", write_spec_file(set.spec));
  if (cfg.vectors != "none") {
    const auto matrices = compute_dataset_descriptors(ds, sfset);
    std::vector<std::string> tags;
    for (const auto& s : ds.structures) tags.push_back(s.tag);
    if (cfg.vectors == "padded" || cfg.vectors == "all") {
      tx.stage(cfg.out_dir / "padded.csv", write_vector_csv(baseline_padded_descriptor(matrices, tags)));
    }
    if (cfg.vectors == "mean" || cfg.vectors == "all") {
      tx.stage(cfg.out_dir / "mean.csv", write_vector_csv(mean_descriptor_vectors(matrices, tags)));
    }
  }
  tx.commit();
  out << "fingerprint: " << set.fingerprints.size() << " structures, "
      << set.spec.histogram.bit_count() << " bits -> " << fp_path.string() << "\n";
  return kSuccess;
}

int cmd_screen(const Common& common, std::string fp_path, const std::string& subset,
               std::string candidates, std::string training, std::ostream& out) {
  RunConfig cfg = load(common);
  OutputTransaction tx;
  const fs::path report_path = cfg.out_dir / "screen_report.json";
  const fs::path kept_path = cfg.out_dir / "kept.txt";

  if (cfg.screen_mode == "novelty") {
    if (candidates.empty() && cfg.candidates) candidates = cfg.candidates->string();
    if (training.empty() && cfg.training) training = cfg.training->string();
    if (candidates.empty() || training.empty()) {
      throw Error("novelty screening needs candidate and training vector files");
    }
    const auto cand = read_vector_csv(read_file(candidates));
    const auto train = read_vector_csv(read_file(training));
    const NoveltyResult result = novelty_screen(cand, train, cfg.novelty);
    tx.stage(report_path, to_json(result, cfg.novelty).dump(2) + "\n");
    tx.stage(kept_path, write_id_list(result.accepted));
    tx.commit();
    out << "screen: novelty accepted " << result.accepted.size() << " of " << cand.size() << "\n";
    return kSuccess;
  }

  if (fp_path.empty()) fp_path = (cfg.out_dir / "fingerprints.dvf").string();
  FingerprintSet set = read_fingerprint_file(read_file(fp_path));
  check_spec_matches(set.spec.histogram, cfg);
  if (!subset.empty()) {
    const auto ids = read_id_list(subset);
    const std::set<std::string> keep(ids.begin(), ids.end());
    std::erase_if(set.fingerprints,
                  [&](const DifferenceVector& fp) { return !keep.count(fp.structure_id); });
  }
  const ScreeningReport report = cfg.screen_mode == "exact"
                                     ? dedup_exact(set.fingerprints)
                                     : dedup_hamming(set.fingerprints, cfg.radius);
  tx.stage(report_path, to_json(report).dump(2) + "\n");
  tx.stage(kept_path, write_id_list(report.kept));
  tx.commit();
  out << "screen: kept " << report.output_count << " of " << report.input_count
      << " (reduction " << report.reduction_ratio << ")\n";
  return kSuccess;
}

struct EmbedInput {
  std::vector<std::string> ids;
  std::vector<std::string> tags;
  std::vector<BitVector> bits;              // fingerprint input
  std::vector<std::vector<double>> values;  // vector input
  bool is_bits = false;
};

EmbedInput load_embed_input(const fs::path& path) {
  EmbedInput in;
  const std::string text = read_file(path);
  if (text.rfind("dvlae-fingerprints", 0) == 0) {
    const FingerprintSet set = read_fingerprint_file(text);
    in.is_bits = true;
    for (const auto& fp : set.fingerprints) {
      in.ids.push_back(fp.structure_id);
      in.tags.push_back(fp.tag);
      in.bits.push_back(fp.bits);
    }
  } else {
    for (auto& v : read_vector_csv(text)) {
      in.ids.push_back(v.id);
      in.tags.push_back(v.tag);
      in.values.push_back(std::move(v.values));
    }
  }
  return in;
}

Embedding embed(const EmbedInput& in, const std::string& method, const TsneConfig& tsne) {
  const std::size_t n = in.ids.size();
  if (method == "pca") {
    if (n < 2) throw Error("PCA needs at least 2 points");
    if (in.is_bits) {
      std::vector<std::vector<double>> reals;
      for (const auto& b : in.bits) reals.push_back(to_reals(b));
      return make_embedding(in.ids, in.tags, pca_coordinates(reals, 2));
    }
    return make_embedding(in.ids, in.tags, pca_coordinates(in.values, 2));
  }
  if (n < 4) throw Error("t-SNE needs at least 4 points, got " + std::to_string(n));
  tsne.validate(n);
  const DistanceMatrix d = in.is_bits ? pairwise_distances(in.bits, Metric::Hamming)
                                      : pairwise_distances(in.values, Metric::Euclidean);
  return make_embedding(in.ids, in.tags, tsne_embed(d, tsne).coordinates);
}

int cmd_embed(const Common& common, std::string input, std::string method, bool compare_baseline,
              std::ostream& out) {
  RunConfig cfg = load(common);
  if (method.empty()) method = cfg.embed_method;
  if (method != "tsne" && method != "pca") throw Error("--method must be tsne or pca");
  compare_baseline = compare_baseline || cfg.compare_baseline;
  if (input.empty()) {
    const std::string name = cfg.embed_input == "fingerprints" ? "fingerprints.dvf"
                             : cfg.embed_input == "padded"     ? "padded.csv"
                                                               : "mean.csv";
    input = (cfg.out_dir / name).string();
  }

  OutputTransaction tx;
  const fs::path emb_path = cfg.out_dir / "embedding.csv";
  const Embedding e = embed(load_embed_input(input), method, cfg.tsne);
  tx.stage(emb_path, write_embedding_csv(e));
  if (compare_baseline) {
    const fs::path padded = cfg.out_dir / "padded.csv";
    if (!fs::exists(padded)) {
      throw Error("compare_baseline needs '" + padded.string() +
                  "' (run fingerprint with fingerprint.vectors = padded or all)");
    }
    tx.stage(cfg.out_dir / "embedding_baseline.csv",
             write_embedding_csv(embed(load_embed_input(padded), method, cfg.tsne)));
  }
  tx.commit();
  out << "embed: " << e.points.size() << " points (" << method << ") -> " << emb_path.string() << "\n";
  return kSuccess;
}

int cmd_ood(const Common& common, const std::string& training_path,
            const std::string& prediction_path, std::optional<std::size_t> top_n, std::ostream& out) {
  RunConfig cfg = load(common);
  const std::size_t n_top = top_n.value_or(cfg.top_n);
  const FingerprintSet training = read_fingerprint_file(read_file(training_path));
  const FingerprintSet predictions = read_fingerprint_file(read_file(prediction_path));
  if (training.spec.histogram.checksum != predictions.spec.histogram.checksum) {
    throw Error("training and prediction fingerprints use different specs (checksum " +
                training.spec.histogram.checksum + " vs " + predictions.spec.histogram.checksum + ")");
  }
  const auto ranked = rank_ood(predictions.fingerprints, training.fingerprints);

  std::string table = "id,min_hamming,normalized\n";
  std::vector<std::string> top;
  for (const auto& s : ranked) {
    table += csv::quote(s.id) + "," + std::to_string(s.min_hamming) + "," +
             csv::format_double(s.normalized) + "\n";
    if (top.size() < n_top) top.push_back(s.id);
  }
  OutputTransaction tx;
  tx.stage(cfg.out_dir / "ood_scores.csv", table);
  tx.stage(cfg.out_dir / "highlight.txt", write_id_list(top));
  tx.commit();
  out << "ood: scored " << ranked.size() << " structures; top " << top.size() << " -> "
      << (cfg.out_dir / "highlight.txt").string() << "\n";
  return kSuccess;
}

int cmd_plot(const Common& common, std::string embedding_path, const std::string& highlight_path,
             const std::string& color_by, std::optional<int> width, std::optional<int> height,
             std::string output, std::ostream& out) {
  PlotSpec spec;
  fs::path out_dir = common.out.empty() ? fs::path(".") : fs::path(common.out);
  if (!common.config.empty()) {
    const RunConfig cfg = load(common);
    spec.width = cfg.plot_width;
    spec.height = cfg.plot_height;
    out_dir = cfg.out_dir;
  }
  if (width) spec.width = *width;
  if (height) spec.height = *height;
  if (spec.width < 16 || spec.height < 16) throw Error("plot width and height must be >= 16");
  if (color_by != "tag" && color_by != "none") throw Error("--color-by must be tag or none");
  spec.color_by_tag = color_by == "tag";
  if (embedding_path.empty()) embedding_path = (out_dir / "embedding.csv").string();
  if (output.empty()) output = (out_dir / "plot.svg").string();
  if (!highlight_path.empty()) spec.highlight = read_id_list(highlight_path);

  const Embedding e = read_embedding_csv(read_file(embedding_path));
  write_file_atomic(output, render_scatter_svg(e, spec));
  out << "plot: " << e.points.size() << " points, " << spec.highlight.size()
      << " highlighted -> " << output << "\n";
  return kSuccess;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

void report_error(std::ostream& err, const std::string& command, int code, const std::string& what) {
  nlohmann::json j;
  j["error"] = one_line(what);
  j["command"] = command;
  j["exit_code"] = code;
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Difference-vector fingerprints of local atomic environments", "dvlae"};
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", common.config, "run configuration file");
    if (config_required) opt->required();
    sub->add_option("--out", common.out, "output directory (overrides the config)");
    sub->add_option("--seed", common.seed, "random seed (overrides the config)");
  };

  std::string spec_path;
  auto* fingerprint = app.add_subcommand("fingerprint", "compute difference-vector fingerprints");
  add_common(fingerprint, true);
  fingerprint->add_option("--spec", spec_path, "reuse binning and reference from a spec file");

  std::string fp_path, subset, candidates, training;
  auto* screen = app.add_subcommand("screen", "remove redundant structures");
  add_common(screen, true);
  screen->add_option("--fingerprints", fp_path, "fingerprint file (default <out>/fingerprints.dvf)");
  screen->add_option("--subset", subset, "only screen ids listed in this file");
  screen->add_option("--candidates", candidates, "candidate vector CSV (novelty mode)");
  screen->add_option("--training", training, "training vector CSV (novelty mode)");

  std::string input, method;
  bool compare_baseline = false;
  auto* embed_cmd = app.add_subcommand("embed", "2-D embedding of fingerprints or vectors");
  add_common(embed_cmd, true);
  embed_cmd->add_option("--input", input, "fingerprint file or vector CSV");
  embed_cmd->add_option("--method", method, "tsne or pca");
  embed_cmd->add_flag("--compare-baseline", compare_baseline, "also embed the padded baseline");

  std::string ood_training, ood_predictions;
  std::optional<std::size_t> top_n;
  auto* ood = app.add_subcommand("ood", "rank structures by distance to the training set");
  add_common(ood, true);
  ood->add_option("--training", ood_training, "training fingerprint file")->required();
  ood->add_option("--predictions", ood_predictions, "prediction fingerprint file")->required();
  ood->add_option("--top-n", top_n, "size of the highlight list (default 20)");

  std::string embedding_path, highlight_path, color_by = "tag", plot_output;
  std::optional<int> width, height;
  auto* plot = app.add_subcommand("plot", "SVG scatter of an embedding");
  add_common(plot, false);
  plot->add_option("--embedding", embedding_path, "embedding CSV (default <out>/embedding.csv)");
  plot->add_option("--highlight", highlight_path, "id list drawn as diamonds");
  plot->add_option("--color-by", color_by, "tag or none");
  plot->add_option("--width", width, "pixels");
  plot->add_option("--height", height, "pixels");
  plot->add_option("--output", plot_output, "SVG path (default <out>/plot.svg)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  std::string command = "dvlae";
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    report_error(err, command, kUserError, e.what());
    return kUserError;
  }

  try {
    if (fingerprint->parsed()) {
      command = "fingerprint";
      return cmd_fingerprint(common, spec_path, out);
    }
    if (screen->parsed()) {
      command = "screen";
      return cmd_screen(common, fp_path, subset, candidates, training, out);
    }
    if (embed_cmd->parsed()) {
      command = "embed";
      return cmd_embed(common, input, method, compare_baseline, out);
    }
    if (ood->parsed()) {
      command = "ood";
      return cmd_ood(common, ood_training, ood_predictions, top_n, out);
    }
    command = "plot";
    return cmd_plot(common, embedding_path, highlight_path, color_by, width, height, plot_output, out);
  } catch (const Error& e) {
    report_error(err, command, kUserError, e.what());
    return kUserError;
  } catch (const std::exception& e) {
    report_error(err, command, kInternalError, e.what());
    return kInternalError;
  }
}

}  // namespace dvlae::cli
