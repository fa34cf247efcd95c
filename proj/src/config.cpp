#include "tornmend/config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <toml.hpp>

namespace tornmend {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

// One [section]: typed reads that reject unknown keys and wrong types.
class Section {
 public:
  Section(const toml::table* table, std::string name, std::initializer_list<std::string_view> keys)
      : table_(table), name_(std::move(name)) {
    if (!table_) return;
    for (const auto& [key, node] : *table_) {
      (void)node;
      bool known = false;
      for (auto k : keys) known = known || k == key.str();
      if (!known) bad("unknown key [" + name_ + "] " + std::string(key.str()));
    }
  }

  void read(std::string_view key, double& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    if (auto v = n->value_exact<double>()) out = *v;
    else if (auto i = n->value_exact<std::int64_t>()) out = static_cast<double>(*i);
    else bad(where(key) + " must be a number");
  }

  void read(std::string_view key, int& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    auto i = n->value_exact<std::int64_t>();
    if (!i || *i < std::numeric_limits<int>::min() || *i > std::numeric_limits<int>::max())
      bad(where(key) + " must be an integer");
    out = static_cast<int>(*i);
  }

  void read(std::string_view key, std::size_t& out) const {
    int v = static_cast<int>(out);
    read(key, v);
    if (v < 0) bad(where(key) + " must be non-negative");
    out = static_cast<std::size_t>(v);
  }

  void read(std::string_view key, bool& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    auto b = n->value_exact<bool>();
    if (!b) bad(where(key) + " must be true or false");
    out = *b;
  }

  void read(std::string_view key, std::string& out) const {
    const toml::node* n = find(key);
    if (!n) return;
    auto s = n->value_exact<std::string>();
    if (!s) bad(where(key) + " must be a string");
    out = *s;
  }

  void read(std::string_view key, std::optional<double>& out) const {
    if (!find(key)) return;
    double v = 0.0;
    read(key, v);
    out = v;
  }

 private:
  const toml::node* find(std::string_view key) const { return table_ ? table_->get(key) : nullptr; }
  std::string where(std::string_view key) const { return "[" + name_ + "] " + std::string(key); }

  const toml::table* table_;
  std::string name_;
};

std::string_view name(Conduction c) { return c == Conduction::exponential ? "exponential" : "rational"; }
std::string_view name(GradientNorm n) { return n == GradientNorm::l2 ? "l2" : "l1"; }

}  // namespace

void Config::validate() const {
  diffusion.validate();
  orient.validate();
  simplify.validate();
  canny.validate();
  match.validate();
  blend.validate();
  repair.validate();
  if (silhouette.background_tolerance < 0 || silhouette.background_tolerance > 255)
    bad("background_tolerance must be in [0, 255]");
  if (!(contour.rim_threshold >= 0.0 && contour.rim_threshold <= 255.0)) bad("rim_threshold must be in [0, 255]");
  if (!(contour.rim_band > 0.0)) bad("rim_band must be positive");
  if (text.advance <= 0) bad("advance must be positive");
  if (text.window_lo > text.window_hi) bad("text window is empty");
  if (text.max_dy < 0) bad("max_dy must be non-negative");
}

Config parse_config(std::string_view toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML: " << e.description() << " at line " << e.source().begin.line;
    bad(msg.str());
  }
  static constexpr std::string_view sections[] = {"diffusion", "binarize", "orient", "contour", "canny",
                                                  "match",     "blend",    "assemble", "repair"};
  for (const auto& [key, node] : root) {
    bool known = false;
    for (auto s : sections) known = known || s == key.str();
    if (!known) bad("unknown section [" + std::string(key.str()) + "]");
    if (!node.is_table()) bad("[" + std::string(key.str()) + "] must be a table");
  }
  auto table = [&](std::string_view s) { return root.get_as<toml::table>(s); };

  Config c;
  {
    Section s(table("diffusion"), "diffusion", {"iterations", "lambda", "kappa", "conduction"});
    s.read("iterations", c.diffusion.iterations);
    s.read("lambda", c.diffusion.lambda);
    s.read("kappa", c.diffusion.kappa);
    std::string kind(name(c.diffusion.conduction));
    s.read("conduction", kind);
    if (kind == "exponential") c.diffusion.conduction = Conduction::exponential;
    else if (kind == "rational") c.diffusion.conduction = Conduction::rational;
    else bad("[diffusion] conduction must be exponential or rational");
  }
  {
    Section s(table("binarize"), "binarize", {"invert", "background_tolerance"});
    s.read("invert", c.silhouette.invert);
    s.read("background_tolerance", c.silhouette.background_tolerance);
  }
  {
    Section s(table("orient"), "orient",
              {"sweep", "coarse_step", "fine_step", "deadband", "min_ink_fraction", "try_flip"});
    s.read("sweep", c.orient.sweep_degrees);
    s.read("coarse_step", c.orient.coarse_step);
    s.read("fine_step", c.orient.fine_step);
    s.read("deadband", c.orient.deadband);
    s.read("min_ink_fraction", c.orient.min_ink_fraction);
    s.read("try_flip", c.orient.try_flip);
  }
  {
    Section s(table("contour"), "contour", {"tolerance", "corner_factor", "corner_angle", "rim_threshold", "rim_band"});
    s.read("tolerance", c.simplify.tolerance);
    s.read("corner_factor", c.simplify.corner_factor);
    s.read("corner_angle", c.simplify.corner_angle);
    s.read("rim_threshold", c.contour.rim_threshold);
    s.read("rim_band", c.contour.rim_band);
  }
  {
    Section s(table("canny"), "canny", {"sigma", "low", "high", "high_quantile", "low_ratio", "norm"});
    s.read("sigma", c.canny.sigma);
    s.read("low", c.canny.low);
    s.read("high", c.canny.high);
    s.read("high_quantile", c.canny.high_quantile);
    s.read("low_ratio", c.canny.low_ratio);
    std::string norm(name(c.canny.norm));
    s.read("norm", norm);
    if (norm == "l2") c.canny.norm = GradientNorm::l2;
    else if (norm == "l1") c.canny.norm = GradientNorm::l1;
    else bad("[canny] norm must be l1 or l2");
  }
  {
    Section s(table("match"), "match", {"tau", "samples", "standoff", "coarse_step", "edge_support", "edge_radius"});
    s.read("tau", c.match.tau);
    s.read("samples", c.match.samples);
    s.read("standoff", c.match.standoff);
    s.read("coarse_step", c.match.coarse_step);
    s.read("edge_support", c.match.edge_support);
    s.read("edge_radius", c.match.edge_radius);
  }
  {
    Section s(table("blend"), "blend", {"feather"});
    s.read("feather", c.blend.feather);
  }
  {
    Section s(table("assemble"), "assemble", {"text_refine", "max_gap", "advance"});
    s.read("text_refine", c.text.enabled);
    s.read("max_gap", c.blend.max_gap);
    s.read("advance", c.text.advance);
  }
  {
    Section s(table("repair"), "repair",
              {"enabled", "atlas", "dictionary", "damage_fraction", "min_score", "reach_cells"});
    s.read("enabled", c.repair.enabled);
    s.read("atlas", c.repair.atlas_path);
    s.read("dictionary", c.repair.dictionary_path);
    s.read("damage_fraction", c.repair.damage_fraction);
    s.read("min_score", c.repair.min_score);
    s.read("reach_cells", c.repair.reach_cells);
  }
  c.validate();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_toml(const Config& c) {
  toml::table canny{{"sigma", c.canny.sigma},
                    {"high_quantile", c.canny.high_quantile},
                    {"low_ratio", c.canny.low_ratio},
                    {"norm", std::string(name(c.canny.norm))}};
  if (c.canny.low) canny.insert("low", *c.canny.low);
  if (c.canny.high) canny.insert("high", *c.canny.high);

  toml::table root{
      {"diffusion", toml::table{{"iterations", c.diffusion.iterations},
                                {"lambda", c.diffusion.lambda},
                                {"kappa", c.diffusion.kappa},
                                {"conduction", std::string(name(c.diffusion.conduction))}}},
      {"binarize", toml::table{{"invert", c.silhouette.invert},
                               {"background_tolerance", c.silhouette.background_tolerance}}},
      {"orient", toml::table{{"sweep", c.orient.sweep_degrees},
                             {"coarse_step", c.orient.coarse_step},
                             {"fine_step", c.orient.fine_step},
                             {"deadband", c.orient.deadband},
                             {"min_ink_fraction", c.orient.min_ink_fraction},
                             {"try_flip", c.orient.try_flip}}},
      {"contour", toml::table{{"tolerance", c.simplify.tolerance},
                              {"corner_factor", c.simplify.corner_factor},
                              {"corner_angle", c.simplify.corner_angle},
                              {"rim_threshold", c.contour.rim_threshold},
                              {"rim_band", c.contour.rim_band}}},
      {"canny", std::move(canny)},
      {"match", toml::table{{"tau", c.match.tau},
                            {"samples", c.match.samples},
                            {"standoff", c.match.standoff},
                            {"coarse_step", c.match.coarse_step},
                            {"edge_support", c.match.edge_support},
                            {"edge_radius", c.match.edge_radius}}},
      {"blend", toml::table{{"feather", c.blend.feather}}},
      {"assemble", toml::table{{"text_refine", c.text.enabled},
                               {"max_gap", c.blend.max_gap},
                               {"advance", c.text.advance}}},
      {"repair", toml::table{{"enabled", c.repair.enabled},
                             {"atlas", c.repair.atlas_path},
                             {"dictionary", c.repair.dictionary_path},
                             {"damage_fraction", c.repair.damage_fraction},
                             {"min_score", c.repair.min_score},
                             {"reach_cells", c.repair.reach_cells}}},
  };
  std::ostringstream out;
  out << root << '\n';
  return out.str();
}

}  // namespace tornmend
