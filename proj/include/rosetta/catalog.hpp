#pragma once

#include <array>
#include <string_view>

namespace rosetta {

// Reference metadata for the eight first-generation child behavioral
// instruments. Ages and times are as commonly published for each instrument;
// "Adult" upper bounds are open-ended.
struct InstrumentInfo {
    std::string_view name;
    std::string_view age_range;
    std::string_view completion_time;
    std::string_view reporters;
    std::string_view item_count;
    std::string_view conditions;
};

inline constexpr std::array<InstrumentInfo, 8> kInstrumentCatalog{{
    {"ADI-R", "2 years - Adult", "90-150 minutes", "Clinician", "93", "Autism"},
    {"ADOS-2", "12 months - Adult", "40-60 minutes", "Clinician", "28-38", "Autism"},
    {"BASC-3", "2-25 years", "10-30 minutes", "Parent, Teacher, Self", "105-192",
     "Autism, ADHD, Anxiety, Conduct Disorder, and Depressive Disorders"},
    {"BRIEF2", "5-18 years", "5-30 minutes", "Parent, Teacher, Self", "55-63",
     "Autism, ADHD, Learning disabilities, and other acquired neurological conditions"},
    {"CBCL", "1.5-18 years", "10-30 minutes", "Parent, Teacher, Self", "100-113",
     "ADHD, Anxiety, Conduct Problems, Depression, Oppositional Defiant, and Somatic Problems"},
    {"Conners 3", "6-18 years", "5-20 minutes", "Parent, Teacher, Self", "99-115",
     "ADHD, Conduct Disorder, and Oppositional Defiant Disorder"},
    {"SRS-2", "2.5 years - Adult", "15-20 minutes", "Parent, Teacher, Self", "65", "Autism"},
    {"VADRS", "6-12 years", "5-20 minutes", "Parent, Teacher", "43-55",
     "ADHD, Anxiety, Conduct Disorder, Depression, and Oppositional Defiant Disorder"},
}};

// The six instruments covering the autism/ADHD case-study cohort, whose
// versions add up to fifteen questionnaire forms in the bundled registry.
inline constexpr std::array<std::string_view, 6> kCaseStudyInstruments{
    "ADI-R", "ADOS-2", "BASC-3", "CBCL", "SRS-2", "VADRS"};

}  // namespace rosetta
