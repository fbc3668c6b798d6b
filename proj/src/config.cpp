#include "dvlae/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dvlae/error.hpp"

namespace dvlae {
namespace {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto p = s.find(sep, start);
    const std::string item = trim(s.substr(start, p == std::string_view::npos ? s.npos : p - start));
    if (!item.empty()) out.push_back(item);
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view expected) {
  throw Error("config: " + std::string(key) + " = '" + std::string(value) + "': expected " +
              std::string(expected));
}

double to_double(std::string_view key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, v, "a number");
  return out;
}

long long to_int(std::string_view key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, v, "an integer");
  return out;
}

std::size_t to_count(std::string_view key, const std::string& v, std::size_t min) {
  const long long x = to_int(key, v);
  if (x < static_cast<long long>(min)) bad(key, v, "an integer >= " + std::to_string(min));
  return static_cast<std::size_t>(x);
}

bool to_bool(std::string_view key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad(key, v, "true|false");
}

class Section {
 public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  std::optional<std::string> get(const std::string& key) {
    used_.insert(key);
    if (tree_ == nullptr) return std::nullopt;
    const auto child = tree_->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) return std::nullopt;
    return trim(child->data());
  }

  std::string qualified(const std::string& key) const {
    return name_.empty() ? key : name_ + "." + key;
  }

  void reject_unknown(bool root) const {
    if (tree_ == nullptr) return;
    for (const auto& [key, child] : *tree_) {
      if (root && !child.empty()) continue;  // a section
      if (!used_.count(key)) throw Error("config: unknown key '" + qualified(key) + "'");
    }
  }

 private:
  std::string name_;
  const pt::ptree* tree_;
  std::set<std::string> used_;
};

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

fs::path existing(const fs::path& base, const std::string& key, const std::string& value) {
  const fs::path p = resolve(base, value);
  if (!fs::exists(p)) {
    throw Error("config: " + key + " refers to missing file '" + p.string() + "'");
  }
  return p;
}

}  // namespace

RunConfig parse_config(std::string_view text, const fs::path& config_path) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error("config: " + e.message() + " at line " + std::to_string(e.line()));
  }

  static const std::set<std::string> kSections{"data",   "reference", "descriptors", "fingerprint",
                                               "screen", "embed",     "ood",         "plot"};
  for (const auto& [key, child] : tree) {
    if (!child.empty() && !kSections.count(key)) throw Error("config: unknown section [" + key + "]");
  }
  const auto section = [&](const std::string& name) {
    const auto child = tree.get_child_optional(pt::ptree::path_type(name, '\0'));
    return Section(name, child ? &*child : nullptr);
  };

  RunConfig cfg;
  cfg.path = config_path;
  const fs::path base = config_path.parent_path();

  Section root("", &tree);
  if (auto v = root.get("format")) {
    cfg.format = static_cast<int>(to_int("format", *v));
    if (cfg.format != 1) throw Error("config: unsupported format " + *v + " (this build reads 1)");
  }
  if (auto v = root.get("out")) cfg.out_dir = resolve(base, *v);
  else cfg.out_dir = resolve(base, cfg.out_dir.string());
  if (auto v = root.get("seed")) cfg.seed = static_cast<std::uint64_t>(to_count("seed", *v, 0));
  root.reject_unknown(true);

  Section data = section("data");
  if (auto v = data.get("manifest")) {
    for (const auto& item : split_list(*v, ',')) cfg.manifests.push_back(existing(base, "data.manifest", item));
  }
  if (auto v = data.get("files")) {
    for (const auto& item : split_list(*v, ',')) cfg.files.push_back(existing(base, "data.files", item));
  }
  if (auto v = data.get("subset")) cfg.subset = existing(base, "data.subset", *v);
  if (auto v = data.get("elements")) {
    for (const auto& item : split_list(*v, ',')) {
      for (const auto& e : split_ws(item)) cfg.elements.push_back(e);
    }
  }
  data.reject_unknown(false);

  Section ref = section("reference");
  if (auto v = ref.get("select")) {
    if (*v == "auto") {
      cfg.reference.kind = ReferenceSelector::Kind::Auto;
    } else if (v->rfind("id:", 0) == 0) {
      cfg.reference = {ReferenceSelector::Kind::Id, trim(v->substr(3))};
    } else if (v->rfind("path:", 0) == 0) {
      cfg.reference = {ReferenceSelector::Kind::Path,
                       existing(base, "reference.select", trim(v->substr(5))).string()};
    } else {
      bad("reference.select", *v, "auto | id:<id> | path:<file>");
    }
  }
  ref.reject_unknown(false);

  Section desc = section("descriptors");
  if (auto v = desc.get("grid")) {
    if (*v == "default") cfg.default_grid = true;
    else if (*v == "custom") cfg.default_grid = false;
    else bad("descriptors.grid", *v, "default|custom");
  }
  if (auto v = desc.get("r_c")) cfg.r_c = to_double("descriptors.r_c", *v);
  if (auto v = desc.get("r_ci")) cfg.r_ci = to_double("descriptors.r_ci", *v);
  if (auto v = desc.get("radial")) {
    for (const auto& item : split_list(*v, ',')) {
      const auto t = split_ws(item);
      if (t.size() != 2 && t.size() != 4) bad("descriptors.radial", item, "'eta r_s [center neighbor]'");
      RadialEntry e{to_double("descriptors.radial", t[0]), to_double("descriptors.radial", t[1]), {}, {}};
      if (t.size() == 4) {
        e.center = t[2];
        e.neighbor = t[3];
      }
      cfg.radial.push_back(e);
    }
  }
  for (const std::string kind : {"g4", "g5"}) {
    if (auto v = desc.get(kind)) {
      for (const auto& item : split_list(*v, ',')) {
        const auto t = split_ws(item);
        const std::string key = "descriptors." + kind;
        if (t.size() != 3 && t.size() != 6) bad(key, item, "'eta zeta lambda [center a b]'");
        AngularEntry e{to_double(key, t[0]), to_double(key, t[1]), static_cast<int>(to_int(key, t[2])),
                       {}, {}, {}};
        if (t.size() == 6) {
          e.center = t[3];
          e.first = t[4];
          e.second = t[5];
        }
        (kind == "g4" ? cfg.g4 : cfg.g5).push_back(e);
      }
    }
  }
  desc.reject_unknown(false);
  if (!cfg.default_grid && cfg.radial.empty() && cfg.g4.empty() && cfg.g5.empty()) {
    throw Error("config: descriptors.grid = custom needs radial, g4 or g5 entries");
  }

  Section fp = section("fingerprint");
  if (auto v = fp.get("bins")) cfg.bins = to_count("fingerprint.bins", *v, 1);
  if (auto v = fp.get("comparison")) cfg.comparison = comparison_from_string(*v);
  if (auto v = fp.get("vectors")) {
    if (*v != "none" && *v != "padded" && *v != "mean" && *v != "all") {
      bad("fingerprint.vectors", *v, "none|padded|mean|all");
    }
    cfg.vectors = *v;
  }
  fp.reject_unknown(false);

  Section screen = section("screen");
  if (auto v = screen.get("mode")) {
    if (*v != "exact" && *v != "hamming" && *v != "novelty") bad("screen.mode", *v, "exact|hamming|novelty");
    cfg.screen_mode = *v;
  }
  if (auto v = screen.get("radius")) cfg.radius = to_count("screen.radius", *v, 0);
  if (auto v = screen.get("threshold")) {
    cfg.novelty.threshold = to_double("screen.threshold", *v);
    if (!(cfg.novelty.threshold >= 0.0)) bad("screen.threshold", *v, "a value >= 0");
  }
  if (auto v = screen.get("aggregate")) {
    if (*v == "min") cfg.novelty.aggregate = Aggregate::Min;
    else if (*v == "mean") cfg.novelty.aggregate = Aggregate::Mean;
    else bad("screen.aggregate", *v, "min|mean");
  }
  if (auto v = screen.get("candidates")) cfg.candidates = existing(base, "screen.candidates", *v);
  if (auto v = screen.get("training")) cfg.training = existing(base, "screen.training", *v);
  screen.reject_unknown(false);

  Section embed = section("embed");
  if (auto v = embed.get("method")) {
    if (*v != "tsne" && *v != "pca") bad("embed.method", *v, "tsne|pca");
    cfg.embed_method = *v;
  }
  if (auto v = embed.get("input")) {
    if (*v != "fingerprints" && *v != "padded" && *v != "mean") {
      bad("embed.input", *v, "fingerprints|padded|mean");
    }
    cfg.embed_input = *v;
  }
  if (auto v = embed.get("perplexity")) cfg.tsne.perplexity = to_double("embed.perplexity", *v);
  if (auto v = embed.get("iterations")) cfg.tsne.iterations = to_count("embed.iterations", *v, 1);
  if (auto v = embed.get("learning_rate")) cfg.tsne.learning_rate = to_double("embed.learning_rate", *v);
  if (auto v = embed.get("compare_baseline")) cfg.compare_baseline = to_bool("embed.compare_baseline", *v);
  embed.reject_unknown(false);

  Section ood = section("ood");
  if (auto v = ood.get("top_n")) cfg.top_n = to_count("ood.top_n", *v, 0);
  ood.reject_unknown(false);

  Section plot = section("plot");
  if (auto v = plot.get("width")) cfg.plot_width = static_cast<int>(to_count("plot.width", *v, 16));
  if (auto v = plot.get("height")) cfg.plot_height = static_cast<int>(to_count("plot.height", *v, 16));
  plot.reject_unknown(false);

  cfg.tsne.seed = cfg.seed;
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

std::vector<fs::path> RunConfig::dataset_files() const {
  std::vector<fs::path> out;
  for (const auto& m : manifests) {
    for (auto& f : read_manifest(m)) out.push_back(std::move(f));
  }
  out.insert(out.end(), files.begin(), files.end());
  return out;
}

SymmetryFunctionSet RunConfig::symmetry_functions() const {
  if (elements.empty()) throw Error("config: no elements declared");
  if (default_grid) {
    if (!r_ci) return SymmetryFunctionSet::default_grid(elements, r_c);
    // default grid with an explicit inner radius
    SymmetryFunctionSet base = SymmetryFunctionSet::default_grid(elements, r_c);
    std::vector<ElementFunctions> blocks = base.blocks();
    for (auto& b : blocks) {
      for (auto& f : b.functions) std::visit([&](auto& p) { p.cutoff.inner = *r_ci; }, f);
    }
    return SymmetryFunctionSet(std::move(blocks));
  }

  const CutoffParams cut{r_ci.value_or(0.9 * r_c), r_c};
  const auto known = [&](const std::string& e) {
    if (!e.empty() && std::find(elements.begin(), elements.end(), e) == elements.end()) {
      throw Error("config: descriptor entry names undeclared element '" + e + "'");
    }
  };
  std::vector<ElementFunctions> blocks;
  for (const std::string& center : elements) {
    ElementFunctions block{center, {}};
    for (const auto& r : radial) {
      known(r.center);
      known(r.neighbor);
      if (!r.center.empty() && r.center != center) continue;
      for (const std::string& nb : elements) {
        if (!r.neighbor.empty() && r.neighbor != nb) continue;
        block.functions.emplace_back(RadialParams{r.eta, r.r_s, nb, cut});
      }
    }
    for (const auto kind : {AngularKind::G4, AngularKind::G5}) {
      for (const auto& a : kind == AngularKind::G4 ? g4 : g5) {
        known(a.center);
        known(a.first);
        known(a.second);
        if (!a.center.empty() && a.center != center) continue;
        for (std::size_t i = 0; i < elements.size(); ++i) {
          for (std::size_t j = i; j < elements.size(); ++j) {
            AngularParams p{kind, a.eta, a.zeta, a.lambda, elements[i], elements[j], cut};
            if (!a.first.empty() && !p.matches(a.first, a.second)) continue;
            block.functions.emplace_back(p);
          }
        }
      }
    }
    blocks.push_back(std::move(block));
  }
  return SymmetryFunctionSet(std::move(blocks));
}

}  // namespace dvlae
