#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "dialseg/encoder.hpp"
#include "dialseg/error.hpp"
#include "dialseg/rng.hpp"
#include "test_util.hpp"

using namespace dialseg;
using namespace dialseg::testutil;

namespace {

TaskSchema dim_schema() {
  TaskSchema s;
  s.name = "dim";
  s.tasks = {"t0", "t1", "t2", "t3"};  // C = 4
  s.slots = {"s0", "s1"};
  s.frames = {"f0", "f1", "f2"};
  return s;
}

}  // namespace

TEST_CASE("feature dimension formula") {
  auto s = dim_schema();
  CHECK(feature_dimension(s, 2, FeatureSet::AV) == 14);     // 2*4 + 3*2
  CHECK(feature_dimension(s, 2, FeatureSet::DA_AV) == 23);  // +9
  CHECK(feature_dimension(s, 2, FeatureSet::FULL) == 32);   // +3*3
}

TEST_CASE("layout trace: history one-hot placement and slot groups") {
  auto s = dim_schema();
  FeatureLayout layout = make_layout(s, 2, FeatureSet::AV);
  UserRegister reg = initial_register(s);
  reg.slot_codes[0] = TernaryCode::High;
  TaskHistory h = TaskHistory::empty(2);
  h.push(1);  // window now [none, t1]

  Encoded enc = encode(reg, h, layout);
  REQUIRE(enc.bits.size() == 14);
  // oldest history group: all zero
  for (std::size_t i = 0; i < 4; ++i) CHECK(enc.bits[i] == 0.0);
  // newest history group holds task 1
  CHECK(enc.bits[4] == 0.0);
  CHECK(enc.bits[5] == 1.0);
  CHECK(enc.bits[6] == 0.0);
  CHECK(enc.bits[7] == 0.0);
  // slot 0 group codes High = (0,1,0); slot 1 group Unknown = (1,0,0)
  CHECK(enc.bits[8] == 0.0);
  CHECK(enc.bits[9] == 1.0);
  CHECK(enc.bits[10] == 0.0);
  CHECK(enc.bits[11] == 1.0);

  // symbolic view: history as (C+1)-valued attributes, none encoded as C
  CHECK(enc.symbolic[0] == 4);
  CHECK(enc.symbolic[1] == 1);
  CHECK(enc.symbolic[2] == 1);
  CHECK(enc.symbolic[3] == 0);
}

TEST_CASE("empty state: all-zero history groups, slot groups (1,0,0)") {
  auto s = dim_schema();
  FeatureLayout layout = make_layout(s, 2, FeatureSet::AV);
  Encoded enc =
      encode(initial_register(s), TaskHistory::empty(2), layout);
  for (std::size_t i = 0; i < 8; ++i) CHECK(enc.bits[i] == 0.0);
  CHECK(enc.bits[8] == 1.0);
  CHECK(enc.bits[11] == 1.0);
}

TEST_CASE("group sum invariants and decode round trip") {
  auto schema = mini_schema();
  Rng rng(777);
  for (FeatureSet fs : {FeatureSet::AV, FeatureSet::DA_AV, FeatureSet::FULL}) {
    FeatureLayout layout = make_layout(schema, 3, fs);
    for (int it = 0; it < 100; ++it) {
      UserRegister reg = initial_register(schema);
      for (auto& c : reg.slot_codes)
        c = static_cast<TernaryCode>(rng.below(3));
      for (auto& c : reg.frame_codes)
        c = static_cast<TernaryCode>(rng.below(3));
      for (auto& c : reg.tiact_codes)
        c = static_cast<TernaryCode>(rng.below(3));
      TaskHistory h = TaskHistory::empty(3);
      for (int p = 0; p < 3; ++p)
        if (rng.chance(0.7))
          h.push(static_cast<int>(rng.below(schema.tasks.size())));

      Encoded enc = encode(reg, h, layout);
      // every ternary group has exactly one set bit; history at most one
      for (const auto& g : layout.groups) {
        double sum = 0.0;
        for (std::size_t i = 0; i < g.width; ++i) sum += enc.bits[g.offset + i];
        if (g.kind == GroupKind::History)
          CHECK(sum <= 1.0);
        else
          CHECK(sum == 1.0);
      }

      DecodedFeatures dec = decode(enc.bits, layout);
      CHECK(dec.history == h);
      CHECK(dec.slot_codes == reg.slot_codes);
      if (fs != FeatureSet::AV) CHECK(dec.tiact_codes == reg.tiact_codes);
      if (fs == FeatureSet::FULL) CHECK(dec.frame_codes == reg.frame_codes);
    }
  }
}

TEST_CASE("encode is injective on (history, visible codes)") {
  auto schema = mini_schema();
  FeatureLayout layout = make_layout(schema, 2, FeatureSet::FULL);
  Rng rng(31337);
  std::map<std::vector<double>, std::pair<std::vector<int>, std::string>> seen;
  for (int it = 0; it < 300; ++it) {
    UserRegister reg = initial_register(schema);
    for (auto& c : reg.slot_codes) c = static_cast<TernaryCode>(rng.below(3));
    for (auto& c : reg.frame_codes) c = static_cast<TernaryCode>(rng.below(3));
    for (auto& c : reg.tiact_codes) c = static_cast<TernaryCode>(rng.below(3));
    TaskHistory h = TaskHistory::empty(2);
    if (rng.chance(0.8)) h.push(static_cast<int>(rng.below(4)));

    Encoded enc = encode(reg, h, layout);
    auto key = std::make_pair(h.window, register_codes_string(reg));
    auto [it2, inserted] = seen.emplace(enc.bits, key);
    if (!inserted) CHECK(it2->second == key);  // same bits -> same state
  }
}

TEST_CASE("vector length depends only on (schema, window, feature set)") {
  auto schema = mini_schema();
  FeatureLayout layout = make_layout(schema, 3, FeatureSet::DA_AV);
  UserRegister reg = initial_register(schema);
  TaskHistory h = TaskHistory::empty(3);
  std::size_t base = encode(reg, h, layout).bits.size();
  reg.slot_codes[0] = TernaryCode::Low;
  h.push(2);
  CHECK(encode(reg, h, layout).bits.size() == base);
  CHECK(layout.dimension == base);
}

TEST_CASE("history label outside the schema is rejected") {
  auto schema = mini_schema();
  FeatureLayout layout = make_layout(schema, 2, FeatureSet::AV);
  TaskHistory h = TaskHistory::empty(2);
  h.push(17);
  CHECK_THROWS_AS(encode(initial_register(schema), h, layout),
                  ValidationError);
}
