#include "scgbp/features.hpp"

#include <gtest/gtest.h>

using namespace scgbp;

TEST(ExtractBeats, LvetAndHeartRate) {
    const std::vector<PacResult> pacs{{0, 1350, PacStatus::Found}};
    const auto e = extract_beats(PeakList{1000, 2000}, pacs, 1000.0);
    ASSERT_EQ(e.beats.size(), 1u);
    EXPECT_DOUBLE_EQ(e.beats[0].lvet_ms, 350.0);
    EXPECT_DOUBLE_EQ(e.beats[0].hr_bpm, 60.0);
    EXPECT_EQ(e.beats[0].beat_index, 0u);
    EXPECT_EQ(e.beats[0].ao_idx, 1000u);
    EXPECT_EQ(e.beats[0].pac_idx, 1350u);
}

TEST(ExtractBeats, HalfSecondSpacingIs120Bpm) {
    const std::vector<PacResult> pacs{{0, 1200, PacStatus::Found}, {1, 1700, PacStatus::Found}};
    const auto e = extract_beats(PeakList{1000, 1500, 2000}, pacs, 1000.0);
    ASSERT_EQ(e.beats.size(), 2u);
    for (const auto& b : e.beats) EXPECT_DOUBLE_EQ(b.hr_bpm, 120.0);
    // other sampling rates scale both quantities
    const auto e2 = extract_beats(PeakList{1000, 1500, 2000}, pacs, 500.0);
    EXPECT_DOUBLE_EQ(e2.beats[0].hr_bpm, 60.0);
    EXPECT_DOUBLE_EQ(e2.beats[0].lvet_ms, 400.0);
}

TEST(ExtractBeats, DropsAndCounts) {
    const std::vector<PacResult> pacs{
        {0, std::nullopt, PacStatus::FlatSegment},
        {1, 2400, PacStatus::Found},
        {2, 3300, PacStatus::Found},
    };
    // beat 2 spans 4000 samples: 15 bpm is below the guard
    const auto e = extract_beats(PeakList{1000, 2000, 3000, 7000}, pacs, 1000.0);
    EXPECT_EQ(e.dropped_no_pac, 1u);
    EXPECT_EQ(e.dropped_guard, 1u);
    ASSERT_EQ(e.beats.size(), 1u);
    EXPECT_EQ(e.beats[0].beat_index, 1u);
    EXPECT_LE(e.beats.size() + e.dropped_guard + e.dropped_no_pac, 3u);
}

TEST(ExtractBeats, MissingIntervalEntryCountsAsNoPac) {
    const auto e = extract_beats(PeakList{1000, 2000, 3000}, std::vector<PacResult>{{1, 2300, PacStatus::Found}}, 1000.0);
    EXPECT_EQ(e.beats.size(), 1u);
    EXPECT_EQ(e.dropped_no_pac, 1u);
}

TEST(ExtractBeats, Preconditions) {
    EXPECT_THROW(extract_beats(PeakList{1000}, {}, 1000.0), std::invalid_argument);
    EXPECT_THROW(extract_beats(PeakList{1000, 2000}, {}, 0.0), std::invalid_argument);
}
