#include <cmath>

#include "test_util.hpp"
#include "tornmend/harness.hpp"
#include "tornmend/report.hpp"

using namespace tornmend;

namespace {

const GlyphAtlas& atlas() { return GlyphAtlas::bundled(); }

}  // namespace

TEST(Rng, DeterministicAndRoughlyStandardNormal) {
  Rng a(9), b(9);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = a.normal();
    ASSERT_EQ(x, b.normal());
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / 20000, 0.0, 0.03);
  EXPECT_NEAR(sq / 20000, 1.0, 0.05);
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(c.index(7), 7u);
  }
}

TEST(Render, EmptyTextIsWhitePage) {
  const GrayImage page = render_document("", atlas(), 100, 80);
  for (auto v : page.data()) ASSERT_EQ(v, 255);
}

TEST(Render, SingleGlyphIsTheAtlasBitmap) {
  std::vector<PlacedWord> words;
  const TextLayout layout;
  const GrayImage page = render_document("A", atlas(), 100, 80, &words, layout);
  ASSERT_EQ(words.size(), 1u);
  EXPECT_EQ(words[0].x, layout.margin_x);
  EXPECT_EQ(words[0].y, layout.margin_top);
  const BinaryMask& g = atlas().glyph('A');
  for (int y = 0; y < page.height(); ++y)
    for (int x = 0; x < page.width(); ++x) {
      const int gx = x - layout.margin_x, gy = y - layout.margin_top;
      const bool ink = g.contains(gx, gy) && g(gx, gy);
      ASSERT_EQ(page(x, y), ink ? 0 : 255) << x << "," << y;
    }
}

TEST(Render, WrapsAndOverflows) {
  std::vector<PlacedWord> words;
  render_document("one two three four", atlas(), 32 + 16 * 9 + 32, 200, &words);
  ASSERT_EQ(words.size(), 4u);
  EXPECT_EQ(words[0].y, words[1].y);
  EXPECT_GT(words[2].y, words[1].y);
  EXPECT_ERROR_CODE(render_document(std::string(400, 'a'), atlas(), 100, 60), ErrorCode::TextOverflow);
  EXPECT_ERROR_CODE(render_document("one two three four five six seven", atlas(), 120, 80), ErrorCode::TextOverflow);
}

TEST(Document, Deterministic) {
  const Document a = make_document(5, Dictionary::bundled(), atlas());
  const Document b = make_document(5, Dictionary::bundled(), atlas());
  const Document c = make_document(6, Dictionary::bundled(), atlas());
  EXPECT_EQ(a.page, b.page);
  EXPECT_EQ(a.text, b.text);
  EXPECT_NE(a.text, c.text);
  EXPECT_GT(a.words.size(), 20u);
}

TEST(Spec, Validation) {
  TearSpec s;
  EXPECT_NO_THROW(s.validate(640));
  s.amplitude = 90.0;
  EXPECT_ERROR_CODE(s.validate(640), ErrorCode::InvalidSpec);
  s = {};
  s.gap_width = 25.0;
  EXPECT_ERROR_CODE(s.validate(640), ErrorCode::InvalidSpec);
  s = {};
  s.noise_sigma = -1.0;
  EXPECT_ERROR_CODE(s.validate(640), ErrorCode::InvalidSpec);
  s = {};
  s.displace_b = {0.5, 0.0};
  EXPECT_ERROR_CODE(s.validate(640), ErrorCode::InvalidSpec);
}

TEST(Spec, JsonRoundTripAndUnknownKeys) {
  TearSpec s;
  s.kind = TearSpec::Kind::polyline;
  s.gap_width = 3.0;
  s.flip_b = true;
  s.displace_b = {4.0, -2.0};
  s.seed = 11;
  s.document = 4;
  const TearSpec t = tear_spec_from_json(to_json(s));
  EXPECT_EQ(to_json(t), to_json(s));
  EXPECT_ERROR_CODE(tear_spec_from_json(nlohmann::json{{"seed", 1}, {"colour", "red"}}), ErrorCode::InvalidSpec);
  EXPECT_ERROR_CODE(tear_spec_from_json(nlohmann::json{{"kind", "zigzag"}}), ErrorCode::InvalidSpec);
}

class Tears : public ::testing::TestWithParam<TearSpec::Kind> {};

TEST_P(Tears, OwnerPartitionsThePage) {
  for (double gap : {0.0, 2.0, 4.0}) {
    TearSpec spec;
    spec.kind = GetParam();
    spec.gap_width = gap;
    spec.seed = 40 + static_cast<int>(gap);
    const Document doc = make_document(spec.seed, Dictionary::bundled(), atlas());
    const TornPair p = generate_pair(doc.page, spec);
    std::size_t lost = 0;
    for (int y = 0; y < p.owner.height(); ++y)
      for (int x = 0; x < p.owner.width(); ++x) {
        const auto o = p.owner(x, y);
        ASSERT_LE(o, 2);
        const double d = tear_distance(p.truth.tear, {double(x), double(y)});
        if (o == 0) {
          ++lost;
          ASSERT_LE(d, gap / 2 + 1e-9);
        } else if (d > gap / 2 + 1.0) {
          ASSERT_EQ(o, x < tear_x(p.truth.tear, y) ? 1 : 2);
        }
      }
    const double expected = gap * p.truth.tear.length();
    if (gap == 0.0) {
      EXPECT_EQ(lost, 0u);
    } else {
      EXPECT_NEAR(static_cast<double>(lost), expected, 0.1 * expected) << "gap " << gap;
    }
  }
}

TEST_P(Tears, SeededPairsAreReproducible) {
  TearSpec spec;
  spec.kind = GetParam();
  spec.seed = 3;
  spec.noise_sigma = 5.0;
  spec.flip_b = true;
  const Document doc = make_document(spec.seed, Dictionary::bundled(), atlas());
  const TornPair x = generate_pair(doc.page, spec);
  const TornPair y = generate_pair(doc.page, spec);
  EXPECT_EQ(x.a, y.a);
  EXPECT_EQ(x.b, y.b);
  EXPECT_EQ(x.owner, y.owner);
  spec.seed = 4;
  EXPECT_NE(generate_pair(doc.page, spec).b, x.b);
}

INSTANTIATE_TEST_SUITE_P(Kinds, Tears, ::testing::Values(TearSpec::Kind::straight, TearSpec::Kind::polyline));

TEST(Truth, FragmentsCarryTheirPageRegion) {
  TearSpec spec;
  spec.seed = 12;
  spec.displace_b = {30.0, -10.0};
  const Document doc = make_document(spec.seed, Dictionary::bundled(), atlas());
  const TornPair p = generate_pair(doc.page, spec);
  // Every page pixel owned by A appears in scan A at page_to_a.
  for (int y = 0; y < doc.page.height(); y += 7)
    for (int x = 0; x < doc.page.width(); x += 7) {
      const Point q = p.truth.page_to_a.apply({double(x), double(y)});
      if (p.owner(x, y) == 1) ASSERT_EQ(p.a(int(q.x), int(q.y)), doc.page(x, y));
      const Point r = p.truth.page_to_b.apply({double(x), double(y)});
      if (p.owner(x, y) == 2) ASSERT_EQ(p.b(int(r.x), int(r.y)), doc.page(x, y));
    }
  EXPECT_EQ(p.a(0, 0), 40);
}

TEST(Evaluate, OriginalScoresPerfectly) {
  const Document doc = make_document(21, Dictionary::bundled(), atlas());
  TearSpec spec;
  spec.seed = 21;
  spec.gap_width = 2.0;
  const TornPair p = generate_pair(doc.page, spec);
  const EvalReport r = evaluate_image(doc.page, p.truth, doc.page);
  EXPECT_DOUBLE_EQ(r.ink_agreement, 1.0);
  EXPECT_DOUBLE_EQ(r.ink_recall, 1.0);
  EXPECT_DOUBLE_EQ(r.pixel_agreement, 1.0);
  EXPECT_EQ(r.alignment, (Point{}));
}

TEST(Evaluate, BlankImageMissesInk) {
  const Document doc = make_document(22, Dictionary::bundled(), atlas());
  TearSpec spec;
  spec.seed = 22;
  const TornPair p = generate_pair(doc.page, spec);
  const EvalReport r = evaluate_image(GrayImage(doc.page.width(), doc.page.height(), 255), p.truth, doc.page);
  EXPECT_LT(r.ink_recall, 0.05);
  EXPECT_LT(r.ink_agreement, 0.05);
}

TEST(Evaluate, ShiftedImageIsRealigned) {
  const Document doc = make_document(23, Dictionary::bundled(), atlas());
  TearSpec spec;
  spec.seed = 23;
  const TornPair p = generate_pair(doc.page, spec);
  GrayImage shifted(doc.page.width(), doc.page.height(), 255);
  for (int y = 0; y < shifted.height(); ++y)
    for (int x = 0; x < shifted.width(); ++x)
      if (doc.page.contains(x - 3, y + 2)) shifted(x, y) = doc.page(x - 3, y + 2);
  const EvalReport r = evaluate_image(shifted, p.truth, doc.page);
  EXPECT_GT(r.ink_agreement, 0.99);
  EXPECT_EQ(norm(r.alignment), std::hypot(3.0, 2.0));
}
