#pragma once

#include <string>
#include <vector>

#include "roe/summarize.hpp"

namespace roe {

struct KeyFrameParams {
    int window = 1;    // frames kept on each side of a transition
    int n_average = 8; // evenly spaced frames added for completeness
};

struct KeyFrameSet {
    std::vector<int> transition_frames;
    std::vector<int> average_frames;
    std::vector<int> merged; // sorted, unique union of the two
    KeyFrameParams params;
};

// Indices i >= 1 where the phase keyword embedded in situation_text differs
// from the previous record's. Detection runs on the text keyword, not the
// structured field. Throws MalformedLogError naming the first record whose
// text lacks exactly one known keyword.
std::vector<int> detect_transitions(const std::vector<FrameRecord>& episode);

// Collects [t-window, t+window] around every transition t, plus n_average
// evenly spaced frames over [0, len-1] (both endpoints included, nearest-
// integer rounding, deduplicated).
KeyFrameSet select_key_frames(const std::vector<FrameRecord>& episode,
                              const KeyFrameParams& params = {});

// Concatenates the selected frames with index/time headers; one block per
// merged index, in episode order.
std::string render_key_frames(const KeyFrameSet& set, const std::vector<FrameRecord>& episode);

} // namespace roe
