#include "catch_amalgamated.hpp"
#include "fabula/pipeline.hpp"
#include "fabula/synthetic.hpp"

using namespace fabula;
using Catch::Matchers::ContainsSubstring;

namespace {

const Lexicon& lex() {
  static const Lexicon l = Lexicon::load(kDefaultLexicon);
  return l;
}

std::vector<Story> stories(const std::string& babi) { return load_babi(babi); }

const char* kMovementTrain =
    "1 Daniel went to the kitchen.\n"
    "2 Daniel went to the bedroom.\n"
    "3 Where is Daniel?\tbedroom\t2\n";

}  // namespace

TEST_CASE("small counts become words") {
  CHECK(number_word(0) == "none");
  CHECK(number_word(1) == "one");
  CHECK(number_word(3) == "three");
  CHECK(number_word(10) == "ten");
  CHECK(number_word(11) == "11");
}

TEST_CASE("answers render and match golds") {
  CHECK(Answer::truth(Entailment::all).str() == "yes");
  CHECK(Answer::truth(Entailment::some).str() == "maybe");
  CHECK(Answer::truth(Entailment::none).str() == "no");

  Answer values;
  values.kind = Answer::Kind::values;
  values.values = {"office", "park"};
  CHECK(values.str() == "office,park");
  CHECK(values.matches({"park", "office"}));
  CHECK_FALSE(values.matches({"park"}));

  Answer count;
  count.kind = Answer::Kind::count;
  count.count = 2;
  CHECK(count.str() == "two");
  CHECK(count.matches({"two"}));

  CHECK(Answer::truth(Entailment::all).matches({"yes"}));
  CHECK_FALSE(Answer::truth(Entailment::all).matches({"yes", "no"}));
}

TEST_CASE("one movement story teaches rules that transfer to unseen actors") {
  DeterministicBackend backend(lex());
  Report r = run_task(stories(kMovementTrain),
                      stories("1 Mary went to the garden.\n"
                              "2 Mary went to the office.\n"
                              "3 Where is Mary?\toffice\t2\n"),
                      lex(), PipelineConfig{}, backend);

  CHECK(r.train_questions == 1);
  CHECK(r.learn_invocations == 1);
  CHECK(r.hypothesis_score == 4);
  REQUIRE(r.learned_rules.size() == 2);
  CHECK(r.learned_rules[0] ==
        "initiatedAt(be(V1,V2),V3) :- happensAt(go_to(V1,V2),V3),nnp(V1),nn(V2),time(V3).");
  CHECK_THAT(r.learned_rules[1], ContainsSubstring("terminatedAt(be(V1,V2),V3)"));

  CHECK(r.test_questions == 1);
  CHECK(r.test_correct == 1);
  CHECK(r.test_accuracy() == 1.0);
  REQUIRE(r.test_outcomes.size() == 1);
  CHECK(r.test_outcomes[0].predicted == "office");
  CHECK(r.test_outcomes[0].gold == "office");
  CHECK(r.test_outcomes[0].correct);
  CHECK(r.failures.empty());
}

TEST_CASE("the report accuracy agrees with a recount of its outcomes") {
  DeterministicBackend backend(lex());
  Report r = run_task(stories(kMovementTrain), stories(kMovementTrain), lex(), PipelineConfig{},
                      backend);
  size_t correct = 0;
  for (const QuestionOutcome& qo : r.test_outcomes) correct += qo.correct ? 1 : 0;
  CHECK(correct == r.test_correct);
  CHECK(r.test_accuracy() ==
        static_cast<double>(correct) / static_cast<double>(r.test_outcomes.size()));
}

TEST_CASE("a hypothesis that already fits is not relearned") {
  DeterministicBackend backend(lex());
  Session s(lex(), PipelineConfig{}, backend);
  std::vector<Story> train = stories(kMovementTrain);
  s.train(train);
  CHECK(s.report().learn_invocations == 1);
  CHECK(s.report().train_correct == 0);

  s.train(train);
  CHECK(s.report().learn_invocations == 1);
  CHECK(s.report().train_questions == 2);
  CHECK(s.report().train_correct == 1);
}

TEST_CASE("wrong answers become one example with a story-scoped distractor") {
  DeterministicBackend backend(lex());
  Session s(lex(), PipelineConfig{}, backend);
  Session::StoryData sd = s.prepare(stories(kMovementTrain)[0]);
  std::vector<CDPI> ex = s.question_examples(sd, 2, Answer{});
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].str() ==
        "#pos({holdsAt(be(daniel,bedroom),3)},{holdsAt(be(daniel,kitchen),3)},"
        "{time(1..3). happensAt(go_to(daniel,kitchen),1). "
        "happensAt(go_to(daniel,bedroom),2).}).");
}

TEST_CASE("timeless facts answer location questions without any learning") {
  DeterministicBackend backend(lex());
  PipelineConfig cfg;
  cfg.ec = false;
  Report r = run_task(stories("1 Mary is in the park.\n"
                              "2 Where is Mary?\tpark\t1\n"),
                      stories("1 John is in the garden.\n"
                              "2 Where is John?\tgarden\t1\n"),
                      lex(), cfg, backend);
  CHECK(r.train_questions == 1);
  CHECK(r.train_correct == 1);
  CHECK(r.learn_invocations == 0);
  CHECK(r.learned_rules.empty());
  CHECK(r.test_correct == 1);
}

TEST_CASE("open alternatives answer maybe without any learning") {
  DeterministicBackend backend(lex());
  Session s(lex(), PipelineConfig{}, backend);
  s.train(stories(
      "1 Mary is either in the park or the office.\n"
      "2 Is Mary in the park?\tmaybe\t1\n"
      "3 Is Mary in the kitchen?\tno\t1\n"));
  const Report& r = s.report();
  CHECK(r.train_questions == 2);
  CHECK(r.train_correct == 2);
  CHECK(r.learn_invocations == 0);
  CHECK(r.failures.empty());
}

TEST_CASE("counting questions are rejected as a learning failure") {
  DeterministicBackend backend(lex());
  Session s(lex(), PipelineConfig{}, backend);
  s.train(stories(
      "1 Daniel got the apple.\n"
      "2 How many objects is Daniel carrying?\tone\t1\n"));
  const Report& r = s.report();
  CHECK(r.learn_invocations == 0);
  REQUIRE(r.failures.size() == 1);
  CHECK_THAT(r.failures[0], ContainsSubstring("learning failed on"));
  CHECK_THAT(r.failures[0], ContainsSubstring("aggregates unsupported"));
}

TEST_CASE("the bias defaults track the reasoning mode") {
  DeterministicBackend backend(lex());
  Session ec(lex(), PipelineConfig{}, backend);
  CHECK(ec.bias_config().maxv == 4);

  PipelineConfig flat;
  flat.ec = false;
  Session plain(lex(), flat, backend);
  CHECK(plain.bias_config().maxv == 3);

  PipelineConfig pinned;
  pinned.maxv = 5;
  Session wide(lex(), pinned, backend);
  CHECK(wide.bias_config().maxv == 5);

  CHECK(ec.bias_config().constants.at("jj") ==
        std::vector<std::string>{"bored", "hungry", "thirsty", "tired"});
}

TEST_CASE("type facts accumulate in the background as constants appear") {
  DeterministicBackend backend(lex());
  Session s(lex(), PipelineConfig{}, backend);
  s.prepare(stories(kMovementTrain)[0]);
  std::set<std::string> facts;
  for (const Rule& r : s.background().rules()) {
    if (r.is_fact()) facts.insert(r.str());
  }
  CHECK(facts.count("nnp(daniel)."));
  CHECK(facts.count("nn(kitchen)."));
  CHECK(facts.count("nn(bedroom)."));
}

TEST_CASE("synthetic corpora train to perfect accuracy on held-out stories") {
  DeterministicBackend backend(lex());
  std::vector<Story> train = load_babi(synthesize(1, 6, 11));
  std::vector<Story> test = load_babi(synthesize(1, 6, 99));
  Report r = run_task(train, test, lex(), PipelineConfig{}, backend);
  CHECK(r.test_questions > 0);
  CHECK(r.test_accuracy() == 1.0);
  CHECK(r.failures.empty());
  CHECK(r.learn_invocations >= 1);
}
