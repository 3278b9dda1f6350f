#pragma once

// Published per-leaf fusion counts of the first-generation mapping:
// (base category, leaf, overlapping instruments, instrument questions,
// Rosetta questions), in table order.

#include <array>
#include <cstddef>
#include <string_view>

namespace rosetta::expected {

struct FusionRow {
    std::string_view base;
    std::string_view leaf;
    std::size_t instruments;
    std::size_t questions;
    std::size_t rosetta;
};

inline constexpr std::string_view kEmotional = "Cognitive/Behavioral/Emotional";
inline constexpr std::string_view kSensory = "Cognitive/Behavioral/Sensory";
inline constexpr std::string_view kSocial = "Cognitive/Behavioral/Social";
inline constexpr std::string_view kExecutive = "Cognitive/Executive Functioning";
inline constexpr std::string_view kLanguage = "Cognitive/Language and Communication";

inline constexpr std::array<FusionRow, 61> kFusionTable{{
    {kEmotional, "Adaptability", 6, 32, 4},
    {kEmotional, "Anger Control", 6, 48, 5},
    {kEmotional, "Anxiety", 7, 126, 17},
    {kEmotional, "Depression", 4, 38, 5},
    {kEmotional, "Mood", 4, 16, 3},
    {kEmotional, "Obsessive Compulsive", 4, 15, 4},
    {kEmotional, "Paranoia", 3, 6, 1},
    {kEmotional, "Emotional", 5, 35, 8},
    {kSensory, "Disturbed", 2, 4, 1},
    {kSensory, "Intrigued", 3, 6, 1},
    {kSensory, "Sensory", 3, 16, 3},
    {kSocial, "Aggression", 6, 57, 3},
    {kSocial, "Atypicality", 3, 32, 6},
    {kSocial, "Awareness", 8, 52, 11},
    {kSocial, "Comforting", 3, 5, 1},
    {kSocial, "Conduct", 4, 100, 14},
    {kSocial, "Ego", 1, 2, 1},
    {kSocial, "Eye Contact", 5, 11, 1},
    {kSocial, "Group Play", 4, 10, 2},
    {kSocial, "Imitation", 2, 3, 1},
    {kSocial, "Joint Attention", 3, 22, 3},
    {kSocial, "Leadership", 1, 7, 1},
    {kSocial, "Maturity", 1, 3, 1},
    {kSocial, "Reciprocal Interactions", 2, 22, 2},
    {kSocial, "Relationships", 4, 32, 4},
    {kSocial, "Shared Interests", 4, 16, 4},
    {kSocial, "Smile", 2, 2, 1},
    {kSocial, "Staring", 3, 7, 1},
    {kSocial, "Withdrawal", 5, 51, 4},
    {kSocial, "Social", 7, 32, 8},
    {kExecutive, "Attention", 6, 62, 7},
    {kExecutive, "Confusion", 2, 2, 1},
    {kExecutive, "Coping", 1, 9, 1},
    {kExecutive, "Fluency", 2, 6, 3},
    {kExecutive, "General", 1, 9, 7},
    {kExecutive, "Hyperactivity", 7, 34, 4},
    {kExecutive, "Imagination", 3, 11, 1},
    {kExecutive, "Impulsivity", 5, 20, 3},
    {kExecutive, "Inhibitory Control", 3, 7, 2},
    {kExecutive, "Memory", 5, 14, 3},
    {kExecutive, "Patience", 4, 7, 1},
    {kExecutive, "Perseveration", 5, 18, 1},
    {kExecutive, "Planning", 4, 24, 4},
    {kExecutive, "Reasoning", 3, 18, 4},
    {kExecutive, "Executive Functioning", 5, 18, 6},
    {kLanguage, "Expressive", 4, 77, 12},
    {kLanguage, "Nonverbal", 2, 10, 2},
    {kLanguage, "Receptive", 6, 17, 5},
    {kLanguage, "Speech", 4, 12, 3},
    {"Motor", "Fine", 2, 8, 1},
    {"Motor", "Gross", 4, 11, 4},
    {"Somatic", "Dermatologic", 1, 2, 1},
    {"Somatic", "Fatigue", 3, 8, 1},
    {"Somatic", "Gastrointestinal", 2, 18, 2},
    {"Somatic", "General", 2, 15, 1},
    {"Somatic", "Illness", 1, 10, 1},
    {"Somatic", "Neurologic", 2, 10, 2},
    {"Somatic", "Sleep", 1, 7, 2},
    {"Somatic", "Vision", 1, 2, 1},
    {"Somatic", "Weight", 1, 1, 1},
    {"Somatic", "Somatic", 1, 2, 1},
}};

inline constexpr std::size_t kRosettaTotal = 209;
inline constexpr std::size_t kHeadlineSourceTotal = 1274;

}  // namespace rosetta::expected
