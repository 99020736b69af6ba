#include <gtest/gtest.h>

#include "support.hpp"

using namespace intent_bench;

namespace {

struct Fixture {
  LoadedCatalog catalog = load_catalog(test_support::golden_dir());
  std::vector<Exemplar> exemplars = load_exemplars(test_support::golden_dir() / "exemplars");
  const ServiceOrder& order(const char* id) const { return *catalog.catalog.find_order(id); }
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST(Exemplars, GoldenStoreLoads) {
  ASSERT_EQ(fx().exemplars.size(), 3u);
  for (const auto& ex : fx().exemplars) {
    EXPECT_TRUE(ex.chain_of_thought.has_value()) << ex.order_id;
    EXPECT_EQ(ex.order_id.rfind("EX-", 0), 0u);
  }
}

TEST(Exemplars, Validation) {
  EXPECT_THROW(make_exemplar("not json", std::nullopt, fx().exemplars[0].answer), ValidationError);
  EXPECT_THROW(make_exemplar(fx().exemplars[0].question, std::nullopt, "ran: {}"), ValidationError);
  const auto ex = make_exemplar(fx().exemplars[0].question, std::string("   "), fx().exemplars[0].answer);
  EXPECT_FALSE(ex.chain_of_thought.has_value());
}

TEST(BuildPrompt, ZeroHasNoExemplars) {
  const auto& o = fx().order("SO-001");
  const auto m = build_prompt(PromptMode::kZero, o, {});
  EXPECT_EQ(count_occurrences(m.user, kExampleMarker), 0u);
  EXPECT_EQ(count_occurrences(m.user, serialize_order(o)), 1u);
  EXPECT_EQ(count_occurrences(m.user, kTargetMarker), 1u);
  EXPECT_NE(m.system.find("```yaml"), std::string::npos);
}

TEST(BuildPrompt, OneHasExactlyOneExample) {
  const auto& o = fx().order("SO-006");
  const auto m = build_prompt(PromptMode::kOne, o, {fx().exemplars[0]});
  EXPECT_EQ(count_occurrences(m.user, kExampleMarker), 1u);
  // ONE omits the reasoning.
  EXPECT_EQ(m.user.find(*fx().exemplars[0].chain_of_thought), std::string::npos);
  // Extra exemplars are ignored.
  EXPECT_EQ(build_prompt(PromptMode::kOne, o, fx().exemplars), m);
}

TEST(BuildPrompt, FewEmbedsEveryExemplarWithReasoning) {
  const auto& o = fx().order("SO-002");
  const auto m = build_prompt(PromptMode::kFew, o, fx().exemplars);
  EXPECT_EQ(count_occurrences(m.user, kExampleMarker), fx().exemplars.size());
  for (const auto& ex : fx().exemplars)
    EXPECT_NE(m.user.find(std::string(trim(*ex.chain_of_thought))), std::string::npos);
}

TEST(BuildPrompt, LengthGrowsWithShots) {
  const auto& o = fx().order("SO-009");
  const auto zero = build_prompt(PromptMode::kZero, o, fx().exemplars);
  const auto one = build_prompt(PromptMode::kOne, o, fx().exemplars);
  const auto few = build_prompt(PromptMode::kFew, o, fx().exemplars);
  EXPECT_LT(zero.user.size(), one.user.size());
  EXPECT_LT(one.user.size(), few.user.size());
}

TEST(BuildPrompt, FewRequiresChainOfThought) {
  auto shots = fx().exemplars;
  shots[0].chain_of_thought.reset();
  try {
    build_prompt(PromptMode::kFew, fx().order("SO-001"), {shots[0], shots[1]});
    FAIL() << "expected ArityError";
  } catch (const ArityError& e) {
    EXPECT_NE(std::string(e.what()).find("FEW requires CoT"), std::string::npos);
  }
}

TEST(BuildPrompt, Arity) {
  EXPECT_THROW(build_prompt(PromptMode::kOne, fx().order("SO-001"), {}), ArityError);
  EXPECT_THROW(build_prompt(PromptMode::kFew, fx().order("SO-001"), {fx().exemplars[0]}), ArityError);
}

TEST(BuildPrompt, RejectsLeakage) {
  const auto& o = fx().order("SO-005");
  auto leaked = fx().exemplars[0];
  leaked.order_id = "SO-005";
  EXPECT_THROW(build_prompt(PromptMode::kOne, o, {leaked}), LeakageError);

  const std::string ref = to_yaml(fx().catalog.references.at("SO-005"));
  auto same_answer = fx().exemplars[1];
  same_answer.answer = ref;
  EXPECT_THROW(build_prompt(PromptMode::kFew, o, {fx().exemplars[0], same_answer}, ref), LeakageError);
  EXPECT_NO_THROW(build_prompt(PromptMode::kFew, o, fx().exemplars, ref));
}

TEST(BuildPrompt, Deterministic) {
  for (auto mode : kAllModes) {
    const auto a = build_prompt(mode, fx().order("SO-008"), fx().exemplars);
    const auto b = build_prompt(mode, fx().order("SO-008"), fx().exemplars);
    EXPECT_EQ(a.system, b.system);
    EXPECT_EQ(a.user, b.user);
  }
}

TEST(PromptMode, ParseAndPrint) {
  for (auto m : kAllModes) EXPECT_EQ(parse_mode(to_string(m)), m);
  EXPECT_EQ(parse_mode(" few "), PromptMode::kFew);
  EXPECT_FALSE(parse_mode("two").has_value());
}
