#include <algorithm>
#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "rosetta/error.hpp"
#include "rosetta/fusion.hpp"

using namespace rosetta;
using namespace rosetta::fusion;

namespace {

const Registry& reg() { return fixtures::canonical(); }

std::size_t rosetta_at(std::string_view id) { return *reg().rosetta_index(id); }

RosettaVector vector_with(const std::string& subject, std::size_t r, int code, std::optional<std::string> date = {}) {
    RosettaVector v;
    v.subject_id = subject;
    v.values.assign(reg().rosetta().size(), std::nullopt);
    v.provenance.assign(reg().rosetta().size(), {});
    v.values[r] = code;
    v.provenance[r].push_back(Provenance{"X", "Y", "1", code, code, std::move(date)});
    return v;
}

}  // namespace

TEST_SUITE("fusion") {

TEST_CASE("translate: SRS-2 item 24 answered 'Often True'") {
    AssessmentRecord rec{"S1", "SRS-2", "School-Age", {{"24", 3}}, std::nullopt};
    const auto v = translate(rec, reg());
    CHECK(v.value(reg(), "R-adaptability-1") == 3);
    CHECK(v.present_count() == 1);
    const auto& prov = v.provenance[rosetta_at("R-adaptability-1")];
    REQUIRE(prov.size() == 1);
    CHECK(prov[0].question_id == "24");
    CHECK(prov[0].choice == 3);
}

TEST_CASE("translate: empty response set is all MISSING") {
    const auto v = translate(AssessmentRecord{"S1", "CBCL", "6-18", {}, std::nullopt}, reg());
    CHECK(v.values.size() == reg().rosetta().size());
    CHECK(v.present_count() == 0);
    for (const auto& p : v.provenance) CHECK(p.empty());
}

TEST_CASE("translate: CBCL 'Not True' maps to code 1 on every mapped item") {
    for (const auto& link : reg().crosswalk().links) {
        if (link.source.instrument != "CBCL") continue;
        AssessmentRecord rec{"S1", "CBCL", link.source.version, {{link.source.question_id, 1}}, std::nullopt};
        CHECK(translate(rec, reg()).value(reg(), link.rosetta_id) == 1);
    }
}

TEST_CASE("translate: unknown version, question or choice is an error") {
    CHECK_THROWS_AS(translate({"S1", "CBCL", "99", {}, std::nullopt}, reg()), DomainError);
    CHECK_THROWS_AS(translate({"S1", "CBCL", "6-18", {{"nope", 1}}, std::nullopt}, reg()), DomainError);
    CHECK_THROWS_AS(translate({"S1", "CBCL", "6-18", {{"1", 4}}, std::nullopt}, reg()), DomainError);
    CHECK_THROWS_AS(translate({"S1", "CBCL", "6-18", {{"1", 0}}, std::nullopt}, reg()), DomainError);
}

TEST_CASE("translate: order preservation across subjects") {
    for (const auto& link : reg().resolved_links()) {
        const auto& v = reg().versions()[link.version];
        const auto& q = v.questions[link.question];
        std::optional<int> prev;
        for (int c = 1; c <= q.scale.size(); ++c) {
            const auto out = translate({"S", v.instrument, v.version, {{q.id, c}}, std::nullopt}, reg());
            const auto code = out.values[link.rosetta];
            REQUIRE(code);
            if (prev) CHECK(*prev <= *code);
            prev = code;
        }
    }
}

TEST_CASE("translate: covered ids equal the crosswalk image of the answered questions") {
    Rng rng(3);
    for (const auto& rec : oracle::random_records(rng, reg(), 100, 100)) {
        std::set<std::string> image;
        for (const auto& [qid, choice] : rec.responses) {
            for (const auto& link : reg().crosswalk().links) {
                if (link.source == SourceRef{rec.instrument, rec.version, qid}) image.insert(link.rosetta_id);
            }
        }
        const auto v = translate(rec, reg());
        std::set<std::string> covered;
        for (std::size_t r = 0; r < v.values.size(); ++r) {
            if (v.values[r]) covered.insert(reg().rosetta()[r].id);
            CHECK(v.values[r].has_value() == !v.provenance[r].empty());
        }
        CHECK(covered == image);
    }
}

TEST_CASE("merge: two values under MAX") {
    const auto r = rosetta_at("R-adaptability-1");
    const auto m = merge({vector_with("S", r, 2), vector_with("S", r, 3)}, ConflictPolicy::max);
    CHECK(m.values[r] == 3);
    CHECK(m.provenance[r].size() == 2);
}

TEST_CASE("merge: a single vector is returned unchanged") {
    const auto v = vector_with("S", 0, 2);
    CHECK(merge({v}) == v);
}

TEST_CASE("merge: three values under MAX, FIRST and LATEST") {
    const auto r = rosetta_at("R-anxiety-1");
    const std::vector<RosettaVector> vs{vector_with("S", r, 1, "2020-01-01"), vector_with("S", r, 3, "2019-01-01"),
                                        vector_with("S", r, 2, "2021-01-01")};
    CHECK(merge(vs, ConflictPolicy::max).values[r] == 3);
    CHECK(merge(vs, ConflictPolicy::first).values[r] == 1);
    CHECK(merge(vs, ConflictPolicy::latest).values[r] == 2);
}

TEST_CASE("merge: LATEST puts undated entries first and lets later inputs win ties") {
    const auto r = rosetta_at("R-anxiety-1");
    CHECK(merge({vector_with("S", r, 3, "2020-01-01"), vector_with("S", r, 1)}, ConflictPolicy::latest).values[r] == 3);
    CHECK(merge({vector_with("S", r, 3, "2020-01-01"), vector_with("S", r, 1, "2020-01-01")}, ConflictPolicy::latest)
              .values[r] == 1);
    CHECK(merge({vector_with("S", r, 3), vector_with("S", r, 1)}, ConflictPolicy::latest).values[r] == 1);
}

TEST_CASE("merge: errors") {
    CHECK_THROWS_AS(merge({}), std::invalid_argument);
    CHECK_THROWS_AS(merge({vector_with("A", 0, 1), vector_with("B", 0, 1)}), std::invalid_argument);
}

TEST_CASE("merge: MAX is commutative and associative") {
    Rng rng(8);
    const auto recs = oracle::random_records(rng, reg(), 60, 1);
    std::vector<RosettaVector> vs;
    for (const auto& r : recs) vs.push_back(translate(r, reg()));
    const auto whole = merge(vs, ConflictPolicy::max).values;
    for (int trial = 0; trial < 10; ++trial) {
        auto shuffled = vs;
        rng.shuffle(shuffled);
        CHECK(merge(shuffled, ConflictPolicy::max).values == whole);
        const auto cut = 1 + rng.below(shuffled.size() - 1);
        const std::vector<RosettaVector> left(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(cut));
        const std::vector<RosettaVector> right(shuffled.begin() + static_cast<std::ptrdiff_t>(cut), shuffled.end());
        CHECK(merge({merge(left), merge(right)}, ConflictPolicy::max).values == whole);
    }
    CHECK(merge({merge(vs)}).values == whole);
}

TEST_CASE("merge: every present value is reproduced by a raw response") {
    Rng rng(9);
    const auto recs = oracle::random_records(rng, reg(), 200, 20);
    const auto cohort = build_cohort(recs, [&] {
        std::vector<std::pair<std::string, Label>> labels;
        for (const auto& r : recs) labels.emplace_back(r.subject_id, Label::autism);
        return labels;
    }(), reg());
    for (const auto& v : cohort.vectors) {
        for (std::size_t r = 0; r < v.values.size(); ++r) {
            if (!v.values[r]) continue;
            bool traced = false;
            for (const auto& p : v.provenance[r]) {
                for (const auto& link : reg().crosswalk().links) {
                    if (link.source == SourceRef{p.instrument, p.version, p.question_id} &&
                        link.rosetta_id == reg().rosetta()[r].id && link.answer_map.at(p.choice) == *v.values[r]) {
                        traced = true;
                    }
                }
            }
            CHECK(traced);
        }
    }
}

TEST_CASE("build_cohort: three subjects, one per class") {
    const std::vector<AssessmentRecord> recs{{"a", "SRS-2", "School-Age", {{"24", 2}}, std::nullopt},
                                             {"b", "CBCL", "6-18", {{"1", 1}}, std::nullopt},
                                             {"c", "VADRS", "Parent Initial", {}, std::nullopt}};
    const auto cohort = build_cohort(recs, {{"a", Label::autism}, {"b", Label::adhd}, {"c", Label::neither}}, reg());
    CHECK(cohort.vectors.size() == 3);
    CHECK(cohort.class_counts() == std::array<std::size_t, 3>{1, 1, 1});
    CHECK(cohort.vectors[0].subject_id == "a");
}

TEST_CASE("build_cohort: two instruments give the union of coverage") {
    AssessmentRecord srs{"s", "SRS-2", "School-Age", {}, std::nullopt};
    AssessmentRecord cbcl{"s", "CBCL", "6-18", {}, std::nullopt};
    for (const auto& q : reg().versions()[*reg().version_index("SRS-2", "School-Age")].questions) srs.responses.emplace_back(q.id, 1);
    for (const auto& q : reg().versions()[*reg().version_index("CBCL", "6-18")].questions) cbcl.responses.emplace_back(q.id, 1);
    const auto a = translate(srs, reg());
    const auto b = translate(cbcl, reg());
    const auto cohort = build_cohort({srs, cbcl}, {{"s", Label::autism}}, reg());
    REQUIRE(cohort.vectors.size() == 1);
    const auto& m = cohort.vectors[0];
    std::size_t union_size = 0;
    for (std::size_t r = 0; r < m.values.size(); ++r) {
        const bool either = a.values[r].has_value() || b.values[r].has_value();
        CHECK(m.values[r].has_value() == either);
        union_size += either ? 1 : 0;
    }
    CHECK(m.present_count() == union_size);
    CHECK(union_size > std::max(a.present_count(), b.present_count()));
}

TEST_CASE("build_cohort: label errors") {
    const std::vector<AssessmentRecord> recs{{"a", "CBCL", "6-18", {{"1", 1}}, std::nullopt}};
    CHECK_THROWS_AS(build_cohort(recs, {}, reg()), DomainError);
    CHECK_THROWS_AS(build_cohort(recs, {{"a", Label::autism}, {"a", Label::adhd}}, reg()), DomainError);
    CHECK_NOTHROW(build_cohort(recs, {{"a", Label::autism}, {"a", Label::autism}, {"z", Label::adhd}}, reg()));
}

TEST_CASE("build_cohort: missingness fractions") {
    const std::vector<AssessmentRecord> recs{{"a", "SRS-2", "School-Age", {{"24", 2}}, std::nullopt},
                                             {"b", "CBCL", "6-18", {}, std::nullopt}};
    const auto cohort = build_cohort(recs, {{"a", Label::autism}, {"b", Label::adhd}}, reg());
    CHECK(cohort.missing_fraction[rosetta_at("R-adaptability-1")] == doctest::Approx(0.5));
    CHECK(cohort.missing_fraction[rosetta_at("R-anxiety-1")] == doctest::Approx(1.0));
}

TEST_CASE("build_cohort: equals the brute-force fusion for every policy") {
    Rng rng(77);
    const auto recs = oracle::random_records(rng, reg(), 300, 60);
    std::vector<std::pair<std::string, Label>> labels;
    for (const auto& r : recs) labels.emplace_back(r.subject_id, kLabels[r.subject_id.back() % 3]);
    for (auto policy : {ConflictPolicy::max, ConflictPolicy::first, ConflictPolicy::latest}) {
        const auto cohort = build_cohort(recs, labels, reg(), policy, 3);
        for (const auto& v : cohort.vectors) {
            std::vector<const AssessmentRecord*> mine;
            for (const auto& r : recs) {
                if (r.subject_id == v.subject_id) mine.push_back(&r);
            }
            CHECK(v.values == oracle::brute_force_fuse(mine, reg(), policy));
        }
    }
}

TEST_CASE("build_cohort: worker count does not change the result") {
    Rng rng(78);
    const auto recs = oracle::random_records(rng, reg(), 200, 40);
    std::vector<std::pair<std::string, Label>> labels;
    for (const auto& r : recs) labels.emplace_back(r.subject_id, Label::adhd);
    const auto a = build_cohort(recs, labels, reg(), ConflictPolicy::max, 1);
    const auto b = build_cohort(recs, labels, reg(), ConflictPolicy::max, 4);
    CHECK(a.vectors == b.vectors);
    CHECK(fused_csv(a, reg()) == fused_csv(b, reg()));
    CHECK(provenance_json(a, reg()) == provenance_json(b, reg()));
}

TEST_CASE("files: records and labels round-trip") {
    Rng rng(4);
    const auto recs = oracle::random_records(rng, reg(), 50, 10);
    const auto text = serialize_records(recs);
    const auto back = parse_records(text);
    // Records sharing (subject, version, date) collapse into one on parse.
    CHECK(serialize_records(back) == serialize_records(parse_records(serialize_records(back))));
    std::size_t responses = 0, back_responses = 0;
    for (const auto& r : recs) responses += r.responses.size();
    for (const auto& r : back) back_responses += r.responses.size();
    CHECK(responses == back_responses);

    const std::vector<std::pair<std::string, Label>> labels{{"a", Label::autism}, {"b", Label::adhd}, {"c", Label::neither}};
    CHECK(parse_labels(serialize_labels(labels)) == labels);
}

TEST_CASE("files: malformed rows are reported") {
    CHECK_THROWS_AS(parse_records("s1\tCBCL\t6-18\t1\n"), ParseError);
    CHECK_THROWS_AS(parse_records("s1\tCBCL\t6-18\t1\tx\n"), ParseError);
    CHECK_THROWS_AS(parse_records("s1\tCBCL\t6-18\t1\t2\t2020-13-01\n"), ParseError);
    CHECK_THROWS_AS(parse_labels("s1\tautistic\n"), ParseError);
    CHECK_THROWS_AS(parse_labels("s1\n"), ParseError);
}

TEST_CASE("files: fused table round-trips values and labels") {
    Rng rng(6);
    const auto recs = oracle::random_records(rng, reg(), 80, 15);
    std::vector<std::pair<std::string, Label>> labels;
    for (const auto& r : recs) labels.emplace_back(r.subject_id, kLabels[r.subject_id.back() % 3]);
    const auto cohort = build_cohort(recs, labels, reg());
    const auto csv = fused_csv(cohort, reg());
    const auto back = parse_fused_csv(csv, reg());
    REQUIRE(back.vectors.size() == cohort.vectors.size());
    for (std::size_t i = 0; i < back.vectors.size(); ++i) {
        CHECK(back.vectors[i].values == cohort.vectors[i].values);
        CHECK(back.label_of(back.vectors[i]) == cohort.label_of(cohort.vectors[i]));
    }
    CHECK(fused_csv(back, reg()) == csv);
    CHECK(csv.find(",,") != std::string::npos);  // MISSING is an empty cell
    CHECK(missingness_csv(cohort, reg()).starts_with("rosetta_id,missing_fraction\n"));
    CHECK(provenance_json(cohort, reg()).find("\"policy\": \"max\"") != std::string::npos);
}

TEST_CASE("files: fused table with the wrong columns is rejected") {
    CHECK_THROWS_AS(parse_fused_csv("subject_id,label,R-x-1\na,autism,1\n", reg()), ParseError);
}

TEST_CASE("policy and label names") {
    for (auto p : {ConflictPolicy::max, ConflictPolicy::first, ConflictPolicy::latest}) {
        CHECK(policy_from_string(to_string(p)) == p);
    }
    for (auto l : kLabels) CHECK(label_from_string(to_string(l)) == l);
    CHECK_FALSE(policy_from_string("mean"));
    CHECK_FALSE(label_from_string("other"));
}

}  // TEST_SUITE
