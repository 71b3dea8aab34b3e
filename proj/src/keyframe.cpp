#include "roe/keyframe.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "roe/errors.hpp"

namespace roe {

namespace {

GamePhase text_phase_or_throw(const std::vector<FrameRecord>& episode, int index) {
    auto phase = extract_unique_phase(episode[index].l2.situation_text);
    if (!phase) {
        throw MalformedLogError("record " + std::to_string(index) +
                                " lacks exactly one phase keyword");
    }
    return *phase;
}

} // namespace

std::vector<int> detect_transitions(const std::vector<FrameRecord>& episode) {
    if (episode.empty()) {
        throw ArgumentError("detect_transitions requires a non-empty episode");
    }
    std::vector<int> transitions;
    GamePhase previous = text_phase_or_throw(episode, 0);
    for (int i = 1; i < static_cast<int>(episode.size()); ++i) {
        GamePhase current = text_phase_or_throw(episode, i);
        if (current != previous) {
            transitions.push_back(i);
        }
        previous = current;
    }
    return transitions;
}

KeyFrameSet select_key_frames(const std::vector<FrameRecord>& episode,
                              const KeyFrameParams& params) {
    if (episode.empty()) {
        throw ArgumentError("select_key_frames requires a non-empty episode");
    }
    const int len = static_cast<int>(episode.size());
    KeyFrameSet out;
    out.params = params;

    std::set<int> transition_set;
    for (int t : detect_transitions(episode)) {
        int lo = std::max(0, t - params.window);
        int hi = std::min(len - 1, t + params.window);
        for (int i = lo; i <= hi; ++i) {
            transition_set.insert(i);
        }
    }
    out.transition_frames.assign(transition_set.begin(), transition_set.end());

    std::set<int> average_set;
    if (params.n_average == 1) {
        average_set.insert(0);
    } else if (params.n_average > 1) {
        for (int i = 0; i < params.n_average; ++i) {
            double pos = static_cast<double>(i) * (len - 1) / (params.n_average - 1);
            average_set.insert(static_cast<int>(std::lround(pos)));
        }
    }
    out.average_frames.assign(average_set.begin(), average_set.end());

    std::set<int> merged = transition_set;
    merged.insert(average_set.begin(), average_set.end());
    out.merged.assign(merged.begin(), merged.end());
    return out;
}

std::string render_key_frames(const KeyFrameSet& set, const std::vector<FrameRecord>& episode) {
    std::ostringstream out;
    bool first = true;
    for (int index : set.merged) {
        const FrameRecord& frame = episode.at(index);
        if (!first) {
            out << "\n\n";
        }
        first = false;
        out << "[Frame " << frame.index << " | " << format_time(frame.l2.tick) << "]\n";
        out << frame.l2.situation_text;
        out << "\nActions:";
        if (frame.action_taken.empty()) {
            out << " none";
        } else {
            for (std::size_t i = 0; i < frame.action_taken.size(); ++i) {
                out << (i ? ", " : " ") << action_name(frame.action_taken[i]);
            }
        }
        if (!frame.events.empty()) {
            out << "\nEvents:";
            for (const auto& e : frame.events) {
                out << "\n  - " << e;
            }
        }
    }
    return out.str();
}

} // namespace roe
