#include "tslam/map.hpp"

#include <algorithm>

namespace tslam {

int Map::add_keyframe(Keyframe kf) {
    if (kf.id < 0) kf.id = next_kf_id_;
    next_kf_id_ = std::max(next_kf_id_, kf.id + 1);
    const int id = kf.id;
    keyframes.emplace(id, std::move(kf));
    return id;
}

int Map::add_point(MapPoint point) {
    if (point.id < 0) point.id = next_point_id_;
    next_point_id_ = std::max(next_point_id_, point.id + 1);
    const int id = point.id;
    points.emplace(id, std::move(point));
    return id;
}

int Map::add_text(TextObject text) {
    if (text.id < 0) text.id = next_text_id_;
    next_text_id_ = std::max(next_text_id_, text.id + 1);
    const int id = text.id;
    texts.emplace(id, std::move(text));
    return id;
}

void Map::add_point_observation(int point_id, int kf_id, const Vec2& pixel) {
    MapPoint& p = points.at(point_id);
    for (auto& [kf, px] : p.observations) {
        if (kf == kf_id) {
            px = pixel;
            return;
        }
    }
    p.observations.emplace_back(kf_id, pixel);
    keyframes.at(kf_id).point_observations.emplace_back(point_id, pixel);
}

void Map::update_covisibility(int kf_id) {
    Keyframe& me = keyframes.at(kf_id);
    std::map<int, int> counts;
    for (const auto& [pid, px] : me.point_observations) {
        const auto it = points.find(pid);
        if (it == points.end()) continue;
        for (const auto& [other_kf, opx] : it->second.observations) {
            if (other_kf != kf_id) ++counts[other_kf];
        }
    }
    for (int tid : me.text_observations) {
        const auto it = texts.find(tid);
        if (it == texts.end()) continue;
        for (const auto& obs : it->second.keyframe_observations) {
            if (obs.kf_id != kf_id) ++counts[obs.kf_id];
        }
    }
    me.covisibility = counts;
    int best = -1;
    int best_count = 0;
    for (const auto& [other, count] : counts) {
        auto other_it = keyframes.find(other);
        if (other_it == keyframes.end()) continue;
        other_it->second.covisibility[kf_id] = count;
        if (other < kf_id && count > best_count) {
            best = other;
            best_count = count;
        }
    }
    if (me.parent < 0 && best >= 0) me.parent = best;
}

std::vector<int> Map::covisible_keyframes(int kf_id) const {
    const Keyframe& me = keyframes.at(kf_id);
    std::vector<std::pair<int, int>> ranked(me.covisibility.begin(), me.covisibility.end());
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<int> out;
    out.reserve(ranked.size());
    for (const auto& [id, count] : ranked) {
        if (keyframes.count(id)) out.push_back(id);
    }
    return out;
}

std::vector<int> Map::local_window(int kf_id, int window_size) const {
    std::vector<int> out = {kf_id};
    for (int id : covisible_keyframes(kf_id)) {
        if (static_cast<int>(out.size()) >= window_size) break;
        out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace tslam
