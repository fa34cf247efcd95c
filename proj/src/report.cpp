#include "tornmend/report.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace tornmend {

namespace {

json point(Point p) { return json::array({p.x, p.y}); }

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::InvalidSpec, "expected a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json affine(const Affine& m) { return json::array({m.a, m.b, m.c, m.d, m.tx, m.ty}); }

Affine affine_from(const json& j) {
  if (!j.is_array() || j.size() != 6) throw Error(ErrorCode::InvalidSpec, "expected a 6-element affine");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>(), j[4].get<double>(), j[5].get<double>()};
}

json polyline(const Polyline& line) {
  json pts = json::array();
  for (Point p : line.points) pts.push_back(point(p));
  return pts;
}

json timings(const std::vector<StageTiming>& t) {
  json out = json::array();
  for (const auto& s : t) out.push_back({{"stage", s.stage}, {"ms", s.ms}});
  return out;
}

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedFile, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path);
}

}  // namespace

json to_json(const MatchScore& s) {
  return {{"side_a", s.side_a},
          {"side_b", s.side_b},
          {"rotation", s.placement.rotation},
          {"translation", point(s.placement.translation)},
          {"pivot", point(s.placement.pivot)},
          {"variance", s.variance},
          {"objective", s.objective},
          {"accepted", s.accepted}};
}

json to_json(const ReconstructionResult& r) {
  json candidates = json::array();
  for (const auto& c : r.candidates) candidates.push_back(to_json(c));
  json repairs = json::array();
  for (const auto& w : r.repairs) {
    json cells = json::array();
    for (const auto& c : w.candidate.cells) cells.push_back({c.x, c.y, c.width, c.height});
    repairs.push_back({{"pattern", w.candidate.text},
                       {"damaged", w.candidate.damaged_count},
                       {"status", std::string(to_string(w.completion.status))},
                       {"text", w.completion.text},
                       {"hits", w.completion.hits},
                       {"cells", cells}});
  }
  json out{{"schema_version", schema_version},
           {"accepted", r.accepted},
           {"reason", r.reason},
           {"match", to_json(r.match)},
           {"candidates", candidates},
           {"orientation",
            {{"a", {{"skew", r.orient_a.skew_degrees}, {"confidence", r.orient_a.confidence}, {"no_text", r.orient_a.no_text}}},
             {"b", {{"skew", r.orient_b.skew_degrees}, {"confidence", r.orient_b.confidence}, {"no_text", r.orient_b.no_text}}}}},
           {"inner_boundary", {{"a", r.inner_a}, {"b", r.inner_b}}},
           {"edge_support", {{"a", r.edge_support_a}, {"b", r.edge_support_b}}},
           {"timings", timings(r.timings)}};
  if (r.image) {
    out["placement"] = {{"rotation", r.placement.rotation},
                        {"translation", point(r.placement.translation)},
                        {"pivot", point(r.placement.pivot)}};
    out["text_refinement"] = {{"applied", r.refinement.applied},
                              {"shift", point(r.refinement.shift)},
                              {"reason", r.refinement.reason}};
    out["frame_a"] = affine(r.frame_a);
    out["frame_b"] = affine(r.frame_b);
    out["origin"] = point(r.origin);
    out["size"] = {r.image->width(), r.image->height()};
    out["gap_pixels"] = r.gap_pixels;
    out["repairs"] = repairs;
  }
  return out;
}

json to_json(const EvalReport& e, bool with_timings) {
  json out{{"reconstructed", e.reconstructed},
           {"accepted", e.accepted},
           {"match_correct", e.match_correct},
           {"placement_error", e.placement_error},
           {"pixel_agreement", e.pixel_agreement},
           {"ink_agreement", e.ink_agreement},
           {"ink_recall", e.ink_recall},
           {"ink_precision", e.ink_precision},
           {"alignment", point(e.alignment)},
           {"repaired_words",
            {{"correct", e.repaired.correct}, {"ambiguous", e.repaired.ambiguous}, {"failed", e.repaired.failed}}}};
  if (with_timings) out["timings"] = timings(e.timings);
  return out;
}

TearSpec tear_spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "tear spec must be an object");
  static constexpr std::string_view keys[] = {"kind",   "teeth",    "amplitude", "gap_width",  "noise_sigma",
                                              "flip_b", "displace_b", "seed",    "document",   "roughness",
                                              "rim_width", "skew_degrees"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(std::begin(keys), std::end(keys), key) == std::end(keys))
      throw Error(ErrorCode::InvalidSpec, "unknown tear spec key: " + key);
  }
  TearSpec s;
  try {
    if (j.contains("kind")) {
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "straight") s.kind = TearSpec::Kind::straight;
      else if (kind == "polyline") s.kind = TearSpec::Kind::polyline;
      else throw Error(ErrorCode::InvalidSpec, "kind must be straight or polyline");
    }
    if (j.contains("teeth")) s.teeth = j.at("teeth").get<int>();
    if (j.contains("amplitude")) s.amplitude = j.at("amplitude").get<double>();
    if (j.contains("gap_width")) s.gap_width = j.at("gap_width").get<double>();
    if (j.contains("noise_sigma")) s.noise_sigma = j.at("noise_sigma").get<double>();
    if (j.contains("flip_b")) s.flip_b = j.at("flip_b").get<bool>();
    if (j.contains("displace_b")) s.displace_b = point_from(j.at("displace_b"));
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("document")) s.document = j.at("document").get<std::uint64_t>();
    if (j.contains("roughness")) s.roughness = j.at("roughness").get<double>();
    if (j.contains("rim_width")) s.rim_width = j.at("rim_width").get<int>();
    if (j.contains("skew_degrees")) s.skew_degrees = j.at("skew_degrees").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("tear spec: ") + e.what());
  }
  return s;
}

json to_json(const TearSpec& s) {
  json out{{"kind", s.kind == TearSpec::Kind::straight ? "straight" : "polyline"},
           {"teeth", s.teeth},
           {"amplitude", s.amplitude},
           {"gap_width", s.gap_width},
           {"noise_sigma", s.noise_sigma},
           {"flip_b", s.flip_b},
           {"displace_b", point(s.displace_b)},
           {"seed", s.seed},
           {"roughness", s.roughness},
           {"rim_width", s.rim_width},
           {"skew_degrees", s.skew_degrees}};
  if (s.document) out["document"] = *s.document;
  return out;
}

std::vector<TearSpec> load_manifest(const std::string& path) {
  const json j = read_json(path);
  if (!j.is_array()) throw Error(ErrorCode::InvalidSpec, "manifest must be a JSON array of tear specs");
  std::vector<TearSpec> out;
  for (const auto& item : j) out.push_back(tear_spec_from_json(item));
  return out;
}

json to_json(const GroundTruth& t) {
  json words = json::array();
  for (const auto& w : t.words) words.push_back({{"text", w.text}, {"x", w.x}, {"y", w.y}});
  return {{"schema_version", schema_version},
          {"tear", polyline(t.tear)},
          {"gap_width", t.gap_width},
          {"flip_b", t.flip_b},
          {"page_size", {t.page_width, t.page_height}},
          {"page_to_a", affine(t.page_to_a)},
          {"page_to_b", affine(t.page_to_b)},
          {"b_to_a", affine(t.b_to_a())},
          {"words", words}};
}

GroundTruth truth_from_json(const json& j) {
  GroundTruth t;
  try {
    for (const auto& p : j.at("tear")) t.tear.points.push_back(point_from(p));
    t.gap_width = j.at("gap_width").get<double>();
    t.flip_b = j.at("flip_b").get<bool>();
    t.page_width = j.at("page_size").at(0).get<int>();
    t.page_height = j.at("page_size").at(1).get<int>();
    t.page_to_a = affine_from(j.at("page_to_a"));
    t.page_to_b = affine_from(j.at("page_to_b"));
    for (const auto& w : j.at("words"))
      t.words.push_back({w.at("text").get<std::string>(), w.at("x").get<int>(), w.at("y").get<int>()});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedFile, std::string("truth: ") + e.what());
  }
  return t;
}

std::string write_pair(const TearSpec& spec, const std::string& out_dir) {
  const HarnessGeometry geometry;
  spec.validate(geometry.page_width);
  const Document doc = make_document(spec.document_seed(), Dictionary::bundled(), GlyphAtlas::bundled(),
                                     geometry.page_width, geometry.page_height);
  TornPair pair = generate_pair(doc.page, spec, geometry);
  pair.truth.words = doc.words;

  const fs::path dir = fs::path(out_dir) / ("pair_" + std::to_string(spec.seed));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  write_image(pair.a, (dir / "a.png").string());
  write_image(pair.b, (dir / "b.png").string());
  write_image(doc.page, (dir / "original.png").string());
  json truth = to_json(pair.truth);
  truth["spec"] = to_json(spec);
  write_text((dir / "truth.json").string(), truth.dump(2) + "\n");
  return dir.string();
}

std::vector<std::string> list_pairs(const std::string& corpus) {
  std::error_code ec;
  fs::directory_iterator it(corpus, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot read corpus " + corpus + ": " + ec.message());
  std::vector<std::string> out;
  for (const auto& entry : it) {
    const std::string name = entry.path().filename().string();
    if (entry.is_directory() && name.rfind("pair_", 0) == 0) out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

json evaluate_pair(const std::string& dir, const CorpusOptions& options) {
  const fs::path p(dir);
  json row{{"pair", p.filename().string()}};
  try {
    const GrayImage a = read_image((p / "a.png").string());
    const GrayImage b = read_image((p / "b.png").string());
    const GrayImage original = read_image((p / "original.png").string());
    const GroundTruth truth = truth_from_json(read_json((p / "truth.json").string()));
    const ReconstructionResult result = stitch(a, b, options.config);
    row.update(to_json(evaluate(result, truth, original), options.timings));
    row["reason"] = result.reason;
  } catch (const Error& e) {
    row["error"] = e.what();
  }
  return row;
}

}  // namespace

json evaluate_corpus(const std::string& corpus, const CorpusOptions& options) {
  const auto pairs = list_pairs(corpus);
  std::vector<json> rows(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < pairs.size();) rows[i] = evaluate_pair(pairs[i], options);
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(pairs.size())));
  std::vector<std::thread> threads;
  for (int k = 1; k < jobs; ++k) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  int accepted = 0, correct = 0, errors = 0;
  double agreement = 0.0, ink = 0.0;
  json repaired{{"correct", 0}, {"ambiguous", 0}, {"failed", 0}};
  for (const auto& r : rows) {
    if (r.contains("error")) {
      ++errors;
      continue;
    }
    accepted += r["accepted"].get<bool>();
    correct += r["match_correct"].get<bool>();
    agreement += r["pixel_agreement"].get<double>();
    ink += r["ink_agreement"].get<double>();
    for (const char* k : {"correct", "ambiguous", "failed"})
      repaired[k] = repaired[k].get<int>() + r["repaired_words"][k].get<int>();
  }
  const double n = std::max<std::size_t>(1, rows.size() - errors);
  return {{"schema_version", schema_version},
          {"pairs", rows},
          {"summary",
           {{"pairs", rows.size()},
            {"errors", errors},
            {"accepted", accepted},
            {"match_correct", correct},
            {"mean_pixel_agreement", agreement / n},
            {"mean_ink_agreement", ink / n},
            {"repaired_words", repaired}}}};
}

}  // namespace tornmend
