#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "rosetta/error.hpp"
#include "rosetta/registry.hpp"
#include "rosetta/text.hpp"

using namespace rosetta;

namespace {

std::size_t parse_error_line(auto&& fn) {
    try {
        fn();
    } catch (const ParseError& e) {
        return e.line();
    }
    FAIL("expected ParseError");
    return 0;
}

const char* kInstrumentHeader =
    "name\tCBCL\n"
    "version\t6-18\n"
    "age_min_months\t72\n"
    "age_max_months\t216\n"
    "reporter\tparent\n"
    "\n"
    "question_id\tleaf_path\tbody\tscale_kind\tchoices\n";

Registry tiny_registry(Crosswalk cw = {}) {
    auto onto = oracle::small_ontology();
    const std::string inst = std::string(kInstrumentHeader) +
                             "1\tCognitive/Behavioral/Social\tPlays alone\tfrequency\tNot True|Somewhat True|Very True\n"
                             "2\tCognitive/Behavioral/Social\tAvoids peers\tfrequency\tNot True|Somewhat True|Very True\n"
                             "3\tMotor/Fine\tClumsy grip\tbinary\tNo|Yes\n";
    auto version = parse_instrument(inst, onto);
    auto rosetta = parse_rosetta_questions(
        "R-social-1\tCognitive/Behavioral/Social\tDoes [NAME] play alone?\t1=Rarely|2=Sometimes|3=Often\n"
        "R-social-2\tCognitive/Behavioral/Social\tDoes [NAME] avoid [his/her] peers?\t1=No|2=Yes\n"
        "R-fine-1\tMotor/Fine\tIs [NAME] clumsy?\t1=No|2=Yes\n",
        onto);
    return Registry(std::move(onto), {std::move(version)}, std::move(rosetta), std::move(cw));
}

}  // namespace

TEST_SUITE("registry") {

TEST_CASE("ontology: fixture resolves the adaptability leaf") {
    const auto tree = parse_ontology(text::read_file(fixtures::registry_dir() / "ontology.txt"));
    CHECK(tree.find_leaf(LeafCategory{{"Cognitive", "Behavioral", "Emotional", "Adaptability"}}));
    CHECK_FALSE(tree.find_leaf(LeafCategory{{"Cognitive", "Behavioral", "Emotional"}}));
}

TEST_CASE("ontology: fixture leaf count equals the fusion table row count") {
    const auto tree = parse_ontology(text::read_file(fixtures::registry_dir() / "ontology.txt"));
    CHECK(tree.leaves().size() == 61);
    CHECK(tree.roots().size() == 3);
}

TEST_CASE("ontology: catch-all leaf shares its parent's name") {
    const auto tree = parse_ontology(text::read_file(fixtures::registry_dir() / "ontology.txt"));
    CHECK(tree.find_leaf(LeafCategory{{"Cognitive", "Behavioral", "Social", "Social"}}));
    CHECK(tree.find_leaf(LeafCategory{{"Somatic", "Somatic"}}));
}

TEST_CASE("ontology: single line is a one-node tree with one leaf") {
    const auto tree = parse_ontology("Cognitive\n");
    CHECK(tree.nodes().size() == 1);
    CHECK(tree.leaves().size() == 1);
    CHECK(tree.nodes()[0].level == 1);
}

TEST_CASE("ontology: comments and blank lines are ignored") {
    const auto tree = parse_ontology("# header\n\nCognitive  # domain\n  Social\n");
    CHECK(tree.nodes().size() == 2);
    CHECK(tree.nodes()[1].parent == std::optional<std::size_t>(0));
}

TEST_CASE("ontology: errors carry line numbers") {
    CHECK(parse_error_line([] { parse_ontology("Cognitive\n  Social\n  Social\n"); }) == 3);
    CHECK(parse_error_line([] { parse_ontology("A\n  B\n    C\n      D\n        E\n"); }) == 5);
    CHECK(parse_error_line([] { parse_ontology("A\n    orphan\n"); }) == 2);
    CHECK(parse_error_line([] { parse_ontology("A\n   odd\n"); }) == 2);
    CHECK(parse_error_line([] { parse_ontology("A\n\tB\n"); }) == 2);
    CHECK_THROWS_AS(parse_ontology(""), ParseError);
    CHECK_THROWS_AS(parse_ontology("# only a comment\n"), ParseError);
}

TEST_CASE("ontology: same name allowed under different parents") {
    const auto tree = parse_ontology("Cognitive\n  General\nSomatic\n  General\n");
    CHECK(tree.leaves().size() == 2);
}

TEST_CASE("ontology: serialize/parse round trip on random trees") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        OntologyTree tree;
        std::vector<std::size_t> nodes;
        const auto n = 1 + rng.below(30);
        for (std::size_t i = 0; i < n; ++i) {
            std::optional<std::size_t> parent;
            if (!nodes.empty() && rng.uniform() < 0.8) parent = nodes[rng.below(nodes.size())];
            if (parent && tree.nodes()[*parent].level >= kMaxOntologyDepth) parent.reset();
            try {
                nodes.push_back(tree.add("n" + std::to_string(rng.below(6)), parent));
            } catch (const std::invalid_argument&) {
                // duplicate sibling drawn; skip
            }
        }
        const auto text = serialize_ontology(tree);
        const auto back = parse_ontology(text);
        CHECK(serialize_ontology(back) == text);
        CHECK(back.leaves().size() == tree.leaves().size());
        std::set<std::string> a, b;
        for (auto l : tree.leaves()) a.insert(tree.path_of(l).to_string());
        for (auto l : back.leaves()) b.insert(back.path_of(l).to_string());
        CHECK(a == b);
    }
}

TEST_CASE("instrument: SRS-2 routine item has a four-choice frequency scale") {
    const auto& reg = fixtures::canonical();
    const auto v = reg.version_index("SRS-2", "School-Age");
    REQUIRE(v);
    const auto* q = reg.versions()[*v].find("24");
    REQUIRE(q);
    CHECK(q->body == "Difficulty with changes to routine");
    CHECK(q->scale.size() == 4);
    CHECK(q->scale.kind == ScaleKind::frequency);
    CHECK(q->scale.choices[1].label == "Sometimes True");
}

TEST_CASE("instrument: CBCL three-choice scale") {
    const auto v = parse_instrument(std::string(kInstrumentHeader) +
                                        "5\tCognitive/Behavioral/Social\tArgues a lot\tfrequency\tNot True|Somewhat True|Very True\n",
                                    oracle::small_ontology());
    REQUIRE(v.questions.size() == 1);
    CHECK(v.questions[0].scale.size() == 3);
    CHECK(v.questions[0].scale.choices[1].label == "Somewhat True");
    CHECK(v.reporter == Reporter::parent);
    CHECK(v.ages == AgeRange{72, 216});
}

TEST_CASE("instrument: one binary question is the smallest legal instrument") {
    const auto v = parse_instrument(std::string(kInstrumentHeader) + "1\tSomatic/Sleep\tSnores\tbinary\tNo|Yes\n",
                                    oracle::small_ontology());
    REQUIRE(v.questions.size() == 1);
    CHECK(v.questions[0].scale.kind == ScaleKind::binary);
}

TEST_CASE("instrument: rejects unknown leaf, gaps in choices, duplicate ids") {
    const auto onto = oracle::small_ontology();
    const std::string h = kInstrumentHeader;
    CHECK(parse_error_line([&] { parse_instrument(h + "1\tCognitive/Nowhere\tx\tbinary\tNo|Yes\n", onto); }) == 8);
    CHECK(parse_error_line([&] { parse_instrument(h + "1\tMotor/Fine\tx\tfrequency\t1=Never|3=Always\n", onto); }) == 8);
    CHECK(parse_error_line([&] {
              parse_instrument(h + "1\tMotor/Fine\tx\tbinary\tNo|Yes\n1\tMotor/Fine\ty\tbinary\tNo|Yes\n", onto);
          }) == 9);
    CHECK_THROWS_AS(parse_instrument(h + "1\tMotor/Fine\tx\tbinary\tOnly\n", onto), ParseError);
    CHECK_THROWS_AS(parse_instrument(h + "1\tMotor/Fine\tx\tbinary\tSame|Same\n", onto), ParseError);
    CHECK_THROWS_AS(parse_instrument(h, onto), ParseError);
}

TEST_CASE("instrument: every bundled instrument round-trips") {
    const auto& reg = fixtures::canonical();
    for (const auto& v : reg.versions()) {
        const auto text = serialize_instrument(v);
        CHECK(parse_instrument(text, reg.ontology()) == v);
    }
}

TEST_CASE("rosetta question: routine-change template renders for Alex") {
    const auto* q = fixtures::canonical().find_rosetta("R-adaptability-1");
    REQUIRE(q);
    CHECK(render_question(*q, "Alex", Gender::male) ==
          "Does Alex become unusually upset with or have difficulty accepting small changes? For example, a change "
          "in his bedtime routine, weekly scheduled activities, or furniture arrangement in the house.");
    CHECK(render_question(*q, "Alex", Gender::female).find("in her bedtime") != std::string::npos);
}

TEST_CASE("rosetta question: single substitution") {
    RosettaQuestion q{"R-smile-1", LeafCategory{{"Motor", "Fine"}}, "[NAME] smiles", {{1, "No"}, {2, "Yes"}}};
    CHECK(render_question(q, "B", Gender::female) == "B smiles");
}

TEST_CASE("rosetta question: template without [NAME] is rejected at parse time") {
    const auto onto = oracle::small_ontology();
    CHECK_THROWS_AS(parse_rosetta_questions("R-fine-1\tMotor/Fine\tDoes [his/her] hand shake?\t1=No|2=Yes\n", onto),
                    ParseError);
    CHECK_THROWS_AS(parse_rosetta_questions("R-fine-1\tMotor/Fine\tDoes [NAME] [wave]?\t1=No|2=Yes\n", onto),
                    ParseError);
    CHECK_FALSE(check_template("Does [his/her] hand shake?").empty());
}

TEST_CASE("rosetta question: rendered text has no placeholder left") {
    for (const auto& q : fixtures::canonical().rosetta()) {
        for (auto g : {Gender::male, Gender::female}) {
            const auto s = render_question(q, "Sam", g);
            CHECK(s.find('[') == std::string::npos);
            CHECK(s.find(']') == std::string::npos);
        }
    }
}

TEST_CASE("rosetta question: ids, codes and round trip") {
    CHECK(is_valid_rosetta_id("R-adaptability-1"));
    CHECK(is_valid_rosetta_id("R-anger-control-12"));
    CHECK_FALSE(is_valid_rosetta_id("R-Adaptability-1"));
    CHECK_FALSE(is_valid_rosetta_id("R-adaptability-0"));
    CHECK_FALSE(is_valid_rosetta_id("adaptability-1"));
    const auto onto = oracle::small_ontology();
    CHECK_THROWS_AS(parse_rosetta_questions("R-fine-1\tMotor/Fine\t[NAME]\t1=No\n", onto), ParseError);
    CHECK_THROWS_AS(parse_rosetta_questions("R-fine-1\tMotor/Fine\t[NAME]\t1=No|3=Yes\n", onto), ParseError);
    CHECK_THROWS_AS(parse_rosetta_questions("R-fine-1\tMotor/Gross\t[NAME]\t1=No|2=Yes\n", onto), ParseError);

    const auto& reg = fixtures::canonical();
    const auto text = serialize_rosetta_questions(reg.rosetta());
    CHECK(parse_rosetta_questions(text, reg.ontology()) == reg.rosetta());
}

TEST_CASE("crosswalk: answer map syntax") {
    CHECK(parse_answer_map("1:1,2:2,3:2,4:3") == AnswerMap{{1, 1}, {2, 2}, {3, 2}, {4, 3}});
    CHECK(format_answer_map({{1, 1}, {2, 2}, {3, 2}, {4, 3}}) == "1:1,2:2,3:2,4:3");
    CHECK_THROWS(parse_answer_map("1:1,1:2"));
    CHECK_THROWS(parse_answer_map("1-1"));
    CHECK_THROWS(parse_answer_map(""));
}

TEST_CASE("crosswalk: adaptability question receives twenty-one sources") {
    const auto& reg = fixtures::canonical();
    const auto r = reg.rosetta_index("R-adaptability-1");
    REQUIRE(r);
    CHECK(reg.links_into(*r).size() == 21);
}

TEST_CASE("crosswalk: identity mapping of a three-choice source") {
    const auto reg = tiny_registry();
    const auto cw = parse_crosswalk("CBCL\t6-18\t1\tR-social-1\t1:1,2:2,3:3\n", reg);
    REQUIRE(cw.links.size() == 1);
    CHECK(cw.links[0].answer_map == AnswerMap{{1, 1}, {2, 2}, {3, 3}});
}

TEST_CASE("crosswalk: three-choice source into a four-code question is a minimal-code violation") {
    auto onto = oracle::small_ontology();
    auto base = tiny_registry();
    auto rosetta = base.rosetta();
    rosetta.push_back(RosettaQuestion{"R-social-3", LeafCategory{{"Cognitive", "Behavioral", "Social"}}, "[NAME]",
                                      {{1, "a"}, {2, "b"}, {3, "c"}, {4, "d"}}});
    const Registry reg(base.ontology(), base.versions(), rosetta);
    try {
        parse_crosswalk("CBCL\t6-18\t1\tR-social-3\t1:1,2:2,3:4\n", reg);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        REQUIRE(e.diagnostics().size() == 1);
        CHECK(e.diagnostics()[0].rule == "minimal-code");
    }
}

TEST_CASE("crosswalk: each structural error is reported with its rule") {
    const auto reg = tiny_registry();
    auto rules = [&](const std::string& rows) {
        std::set<std::string> out;
        for (const auto& d : check_crosswalk(reg, parse_crosswalk_rows(rows))) out.insert(d.rule);
        return out;
    };
    CHECK(rules("CBCL\t6-18\t9\tR-social-1\t1:1,2:2,3:3\n") == std::set<std::string>{"dangling-source"});
    CHECK(rules("CBCL\tX\t1\tR-social-1\t1:1,2:2,3:3\n") == std::set<std::string>{"dangling-source"});
    CHECK(rules("CBCL\t6-18\t1\tR-nope-1\t1:1,2:2,3:3\n") == std::set<std::string>{"dangling-rosetta"});
    CHECK(rules("CBCL\t6-18\t3\tR-social-2\t1:1,2:2\n") == std::set<std::string>{"leaf-agreement"});
    CHECK(rules("CBCL\t6-18\t1\tR-social-1\t1:1,2:2\n") == std::set<std::string>{"answer-total"});
    CHECK(rules("CBCL\t6-18\t1\tR-social-1\t1:1,2:3,3:2\n") == std::set<std::string>{"answer-monotone"});
    CHECK(rules("CBCL\t6-18\t1\tR-social-2\t1:1,2:2,3:3\n") == std::set<std::string>{"answer-range"});
    CHECK(rules("CBCL\t6-18\t1\tR-social-1\t1:1,2:2,3:3\nCBCL\t6-18\t1\tR-social-2\t1:1,2:2,3:2\n") ==
          std::set<std::string>{"many-to-one"});
    CHECK(rules("CBCL\t6-18\t1\tR-social-1\t1:1,2:2,3:3\nCBCL\t6-18\t1\tR-social-1\t1:1,2:2,3:3\n") ==
          std::set<std::string>{"duplicate-link"});
    CHECK(rules("CBCL\t6-18\t1\tR-social-1\t1:1,2:2,3:3\nCBCL\t6-18\t2\tR-social-1\t1:1,2:2,3:3\n").empty());
}

TEST_CASE("crosswalk: bundled crosswalk round-trips") {
    const auto& reg = fixtures::canonical();
    const auto text = serialize_crosswalk(reg.crosswalk());
    CHECK(parse_crosswalk(text, reg) == reg.crosswalk());
}

TEST_CASE("crosswalk: rule checker agrees with brute force on random crosswalks") {
    Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        const auto c = oracle::random_mapping_case(rng);
        const auto got = oracle::tally(check_crosswalk(c.registry, c.registry.crosswalk()));
        const auto want = oracle::brute_force_rules(c.registry, c.registry.crosswalk());
        CHECK(got == want);
    }
}

TEST_CASE("validate: canonical registry yields an empty report") {
    const auto reg = load_registry(fixtures::registry_dir());
    const auto report = validate(reg);
    CHECK(report.canonical());
    CHECK(report.to_json() == "[]\n");
}

TEST_CASE("validate: source mapped to two Rosetta questions") {
    const auto reg = tiny_registry(parse_crosswalk_rows(
        "CBCL\t6-18\t1\tR-social-1\t1:1,2:2,3:3\nCBCL\t6-18\t1\tR-social-2\t1:1,2:2,3:2\n"
        "CBCL\t6-18\t2\tR-social-1\t1:1,2:2,3:3\nCBCL\t6-18\t3\tR-fine-1\t1:1,2:2\n"));
    const auto report = validate(reg);
    CHECK(report.has_rule("many-to-one"));
    CHECK(report.error_count() == 1);
}

TEST_CASE("validate: order inversion in an answer map") {
    const auto reg = tiny_registry(parse_crosswalk_rows(
        "CBCL\t6-18\t1\tR-social-1\t1:1,2:3,3:2\nCBCL\t6-18\t2\tR-social-1\t1:1,2:2,3:3\n"
        "CBCL\t6-18\t3\tR-fine-1\t1:1,2:2\n"));
    const auto report = validate(reg);
    CHECK(report.has_rule("answer-monotone"));
    CHECK(report.error_count() == 1);
}

TEST_CASE("validate: unmapped source questions are warnings") {
    const auto reg = tiny_registry(parse_crosswalk_rows("CBCL\t6-18\t1\tR-social-1\t1:1,2:2,3:3\n"));
    const auto report = validate(reg);
    CHECK(report.error_count() == 0);
    CHECK(report.warning_count() == 2);
    CHECK(report.has_rule("unmapped-source"));
}

TEST_CASE("validate: ontology must hold the three domains") {
    auto onto = parse_ontology("Cognitive\n  Social\nMotor\n");
    const Registry reg(std::move(onto), {}, {});
    CHECK(validate(reg).has_rule("ontology-roots"));
}

TEST_CASE("validate: repeated runs give identical reports") {
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto c = oracle::random_mapping_case(rng);
        CHECK(validate(c.registry) == validate(c.registry));
    }
}

TEST_CASE("validate: diagnostics render as text and JSON") {
    const auto reg = tiny_registry(parse_crosswalk_rows("CBCL\t6-18\t1\tR-social-1\t1:1,2:3,3:2\n"));
    const auto report = validate(reg);
    CHECK(report.to_text().find("crosswalk.tsv:1: error: [answer-monotone]") != std::string::npos);
    const auto json = report.to_json();
    CHECK(json.find("\"rule\"") != std::string::npos);
    CHECK(json.find("\"severity\"") != std::string::npos);
}

TEST_CASE("registry: canonical invariants hold for every link") {
    const auto& reg = fixtures::canonical();
    std::map<std::size_t, int> fewest;
    for (const auto& link : reg.resolved_links()) {
        const auto& src = reg.versions()[link.version].questions[link.question];
        const auto& dst = reg.rosetta()[link.rosetta];
        CHECK(src.leaf == dst.leaf);
        REQUIRE(static_cast<int>(link.codes.size()) == src.scale.size());
        CHECK(std::is_sorted(link.codes.begin(), link.codes.end()));
        CHECK(link.codes.front() >= 1);
        CHECK(link.codes.back() <= dst.code_count());
        auto [it, fresh] = fewest.try_emplace(link.rosetta, src.scale.size());
        if (!fresh) it->second = std::min(it->second, src.scale.size());
    }
    for (const auto& [r, n] : fewest) CHECK(reg.rosetta()[r].code_count() <= n);
}

TEST_CASE("registry: load rejects syntax errors with file and line") {
    fixtures::TempDir dir("badreg");
    std::filesystem::copy(fixtures::registry_dir(), dir.path(), std::filesystem::copy_options::recursive);
    text::write_file(dir.path() / "rosetta.tsv", "R-x-1\tCognitive/Nowhere\t[NAME]\t1=a|2=b\n");
    try {
        load_registry(dir.path());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.file().find("rosetta.tsv") != std::string::npos);
    }
}

}  // TEST_SUITE
