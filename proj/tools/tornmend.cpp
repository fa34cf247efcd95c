// tornmend: stitch two torn document scans back together.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tornmend/report.hpp"

using namespace tornmend;
using nlohmann::json;

namespace {

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path);
}

void write_string(const std::string& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << s;
}

struct Overrides {
  std::string config_path;
  std::optional<double> tau;
  std::optional<int> samples;
  std::optional<double> feather;
  std::optional<double> tolerance;
  std::optional<int> iterations;
  bool no_repair = false;
  bool no_text_refine = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "TOML configuration")->check(CLI::ExistingFile);
    cmd->add_option("--tau", tau, "acceptance spread in px");
    cmd->add_option("--samples", samples, "boundary samples per side");
    cmd->add_option("--feather", feather, "blend band half-width in px");
    cmd->add_option("--tolerance", tolerance, "simplification tolerance in px");
    cmd->add_option("--iterations", iterations, "diffusion iterations");
    cmd->add_flag("--no-repair", no_repair, "skip character repair");
    cmd->add_flag("--no-text-refine", no_text_refine, "keep the boundary-only placement");
  }

  Config resolve() const {
    Config c = config_path.empty() ? Config{} : load_config(config_path);
    if (tau) c.match.tau = *tau;
    if (samples) c.match.samples = *samples;
    if (feather) c.blend.feather = *feather;
    if (tolerance) c.simplify.tolerance = *tolerance;
    if (iterations) c.diffusion.iterations = *iterations;
    if (no_repair) c.repair.enabled = false;
    if (no_text_refine) c.text.enabled = false;
    c.validate();
    return c;
  }
};

int run_mend(const std::string& a_path, const std::string& b_path, const std::string& out_path,
             const std::string& report_path, const Overrides& overrides) {
  const Config config = overrides.resolve();
  const GrayImage a = read_image(a_path);
  const GrayImage b = read_image(b_path);
  const ReconstructionResult result = stitch(a, b, config);
  if (result.image && !out_path.empty()) write_image(*result.image, out_path);
  if (!report_path.empty()) write_json(to_json(result), report_path);

  const auto& m = result.match;
  if (result.accepted) {
    std::printf("accepted: sides %d/%d, rotation %d, variance %.4f, %zu gap px, %zu word(s) examined\n", m.side_a,
                m.side_b, m.placement.rotation, m.variance, result.gap_pixels, result.repairs.size());
    return 0;
  }
  std::printf("no match: %s\n", result.reason.c_str());
  return 2;
}

int run_stage(const std::string& stage, const std::vector<std::string>& inputs, const std::string& out_path,
              const Overrides& overrides) {
  const Config config = overrides.resolve();
  const std::size_t want = stage == "match" ? 2 : 1;
  if (inputs.size() != want)
    throw Error(ErrorCode::InvalidArgument, "stage " + stage + " takes " + std::to_string(want) + " input(s)");
  const GrayImage img = read_image(inputs[0]);

  if (stage == "filter") {
    write_image(anisotropic_diffuse(img, config.diffusion), out_path);
    return 0;
  }
  const Fragment frag = make_fragment(anisotropic_diffuse(img, config.diffusion), config.silhouette);
  if (stage == "orient") {
    const auto e = estimate_orientation(frag.image, frag.mask, config.orient);
    const bool level = !e.no_text && std::abs(e.skew_degrees) >= config.orient.deadband;
    const Fragment out = level ? rotate_fragment(frag, -e.skew_degrees) : frag;
    write_image(out.image, out_path);
    std::printf("skew %.2f deg, confidence %.3f%s\n", e.skew_degrees, e.confidence, e.no_text ? ", no text" : "");
    return 0;
  }
  if (stage == "simplify") {
    const auto bounds = extract_boundaries(frag.image, frag.mask, config.contour);
    const auto sides = split_sides(bounds.matching(), config.simplify);
    write_string(sides_to_svg(sides, frag.image.width(), frag.image.height()), out_path);
    int jagged = 0;
    for (const auto& s : sides) jagged += s.classification == SideClass::non_uniform;
    std::printf("%zu side(s), %d non-uniform%s\n", sides.size(), jagged, bounds.inner ? ", inner boundary" : "");
    return 0;
  }
  if (stage == "edges") {
    const EdgeMap edges = canny(frag.image, config.canny);
    write_image(edges.edges, out_path);
    std::printf("%zu edge pixels\n", edges.edges.count());
    return 0;
  }
  if (stage == "match") {
    const Fragment other = make_fragment(anisotropic_diffuse(read_image(inputs[1]), config.diffusion),
                                         config.silhouette);
    NormalizedPair pair = normalize_pair(frag, other, config.orient);
    const auto sides_a = split_sides(extract_boundaries(pair.a.image, pair.a.mask, config.contour).matching(),
                                     config.simplify, 0);
    const auto sides_b = split_sides(extract_boundaries(pair.b.image, pair.b.mask, config.contour).matching(),
                                     config.simplify, 1);
    const Point extent{double(std::max(pair.a.image.width(), pair.b.image.width())),
                       double(std::max(pair.a.image.height(), pair.b.image.height()))};
    const Selection sel = select_pair(sides_a, sides_b, pair.flip_candidates, extent, config.match);
    json table = json::array();
    for (const auto& c : sel.candidates) table.push_back(to_json(c));
    write_json({{"schema_version", schema_version}, {"best", to_json(sel.best)}, {"candidates", table}}, out_path);
    std::printf("best: sides %d/%d, rotation %d, variance %.4f, %s\n", sel.best.side_a, sel.best.side_b,
                sel.best.placement.rotation, sel.best.variance, sel.best.accepted ? "accepted" : "rejected");
    return sel.best.accepted ? 0 : 2;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown stage " + stage);
}

int run_synth(const std::string& manifest, const std::string& out_dir, std::optional<std::uint64_t> seed) {
  auto specs = load_manifest(manifest);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (seed) {
      if (!specs[i].document) specs[i].document = specs[i].seed;
      specs[i].seed = *seed + i;
    }
    const std::string dir = write_pair(specs[i], out_dir);
    std::printf("%s\n", dir.c_str());
  }
  std::printf("%zu pair(s) written\n", specs.size());
  return 0;
}

int run_eval(const std::string& corpus, const std::string& report_path, int jobs, bool with_timings,
             const Overrides& overrides) {
  CorpusOptions options;
  options.config = overrides.resolve();
  options.jobs = jobs;
  options.timings = with_timings;
  const json report = evaluate_corpus(corpus, options);
  write_json(report, report_path);
  const auto& s = report["summary"];
  std::printf("%d pair(s): %d accepted, %d correct, mean ink agreement %.4f, %d error(s)\n",
              s["pairs"].get<int>(), s["accepted"].get<int>(), s["match_correct"].get<int>(),
              s["mean_ink_agreement"].get<double>(), s["errors"].get<int>());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruct a torn document from two scanned fragments"};
  app.require_subcommand(1);

  Overrides overrides;

  std::string a_path, b_path, out_path, report_path;
  auto* mend = app.add_subcommand("mend", "stitch two fragments");
  mend->add_option("a", a_path, "first fragment")->required();
  mend->add_option("b", b_path, "second fragment")->required();
  mend->add_option("-o,--output", out_path, "stitched image");
  mend->add_option("--report", report_path, "JSON report");
  overrides.attach(mend);

  std::string stage_name;
  std::vector<std::string> stage_inputs;
  std::string stage_out;
  auto* stage = app.add_subcommand("stage", "run one stage for inspection");
  stage->add_option("stage", stage_name, "filter, orient, simplify, edges or match")
      ->required()
      ->check(CLI::IsMember({"filter", "orient", "simplify", "edges", "match"}));
  stage->add_option("inputs", stage_inputs, "input image(s)")->required();
  stage->add_option("-o,--output", stage_out, "output file")->required();
  overrides.attach(stage);

  std::string manifest, synth_out;
  std::optional<std::uint64_t> seed;
  auto* synth = app.add_subcommand("synth", "generate a synthetic torn-pair corpus");
  synth->add_option("--manifest", manifest, "JSON array of tear specs")->required()->check(CLI::ExistingFile);
  synth->add_option("-o,--output", synth_out, "output directory")->required();
  synth->add_option("--seed", seed, "base seed replacing the manifest seeds");

  std::string corpus, eval_report;
  int jobs = 1;
  bool with_timings = false;
  auto* eval = app.add_subcommand("eval", "reconstruct and score a corpus");
  eval->add_option("--corpus", corpus, "corpus directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--report", eval_report, "JSON report")->required();
  eval->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  eval->add_flag("--timings", with_timings, "include stage timings");
  overrides.attach(eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*mend) return run_mend(a_path, b_path, out_path, report_path, overrides);
    if (*stage) return run_stage(stage_name, stage_inputs, stage_out, overrides);
    if (*synth) return run_synth(manifest, synth_out, seed);
    if (*eval) return run_eval(corpus, eval_report, jobs, with_timings, overrides);
  } catch (const Error& e) {
    std::fprintf(stderr, "tornmend: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "tornmend: %s\n", e.what());
    return 1;
  }
  return 1;
}
