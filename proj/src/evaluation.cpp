// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include "actionprop/evaluation.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace actionprop {

std::optional<BoundingBox> GroundTruthTrack::boxAt(int frame) const {
    const int i = frame - start_frame;
    if (i < 0 || static_cast<std::size_t>(i) >= boxes.size()) return std::nullopt;
    return boxes[static_cast<std::size_t>(i)];
}

int GroundTruthTrack::annotatedFrames() const {
    int n = 0;
    for (const auto& b : boxes)
        if (b) ++n;
    return n;
}

double trackIou(const GroundTruthTrack& g, const Track& t) {
    if (g.annotatedFrames() == 0) throw std::invalid_argument("ground truth has no boxes");

    std::set<int> comparable;
    std::map<int, const BoundingBox*> track_boxes;
    for (const auto& e : t.entries) {
        comparable.insert(e.frame);
        track_boxes[e.frame] = &e.box;
    }
    for (std::size_t i = 0; i < g.boxes.size(); ++i)
        if (g.boxes[i]) comparable.insert(g.start_frame + static_cast<int>(i));
    if (comparable.empty()) throw std::invalid_argument("no comparable frames");

    double sum = 0.0;
    for (int f : comparable) {
        const auto gb = g.boxAt(f);
        const auto it = track_boxes.find(f);
        if (gb && it != track_boxes.end()) sum += iou(*gb, *it->second);
    }
    return sum / static_cast<double>(comparable.size());
}

double recallAt(const std::vector<ActionProposal>& proposals,
                const std::vector<GroundTruthTrack>& gts, double eta) {
    if (gts.empty()) throw std::invalid_argument("no ground truths to evaluate");

    struct Pair {
        double iou;
        std::size_t gi;
        std::size_t pi;
    };
    std::vector<Pair> pairs;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
        for (std::size_t pi = 0; pi < proposals.size(); ++pi) {
            if (proposals[pi].track.video != gts[gi].video) continue;
            const double v = trackIou(gts[gi], proposals[pi].track);
            if (v >= eta) pairs.push_back({v, gi, pi});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.gi != b.gi) return a.gi < b.gi;
        return a.pi < b.pi;
    });

    std::vector<bool> gt_used(gts.size(), false), prop_used(proposals.size(), false);
    int matched = 0;
    for (const auto& p : pairs) {
        if (gt_used[p.gi] || prop_used[p.pi]) continue;
        gt_used[p.gi] = true;
        prop_used[p.pi] = true;
        ++matched;
    }
    return static_cast<double>(matched) / static_cast<double>(gts.size());
}

AboResult aboMabo(const std::vector<ActionProposal>& proposals,
                  const std::vector<GroundTruthTrack>& gts) {
    if (gts.empty()) throw std::invalid_argument("no ground truths to evaluate");

    AboResult r;
    std::map<std::string, std::pair<double, int>> per_class;  // sum, count
    double total = 0.0;
    for (const auto& g : gts) {
        double best = 0.0;
        for (const auto& p : proposals) {
            if (p.track.video != g.video) continue;
            best = std::max(best, trackIou(g, p.track));
        }
        total += best;
        auto& agg = per_class[g.label];
        agg.first += best;
        agg.second += 1;
    }
    r.abo = total / static_cast<double>(gts.size());
    double class_sum = 0.0;
    for (const auto& [label, agg] : per_class) {
        const double class_abo = agg.first / static_cast<double>(agg.second);
        r.per_class[label] = class_abo;
        class_sum += class_abo;
    }
    r.mabo = class_sum / static_cast<double>(per_class.size());
    return r;
}

MetricsReport evaluateProposals(const std::vector<ActionProposal>& proposals,
                                const std::vector<GroundTruthTrack>& gts, double eta) {
    MetricsReport m;
    m.eta = eta;
    m.recall = recallAt(proposals, gts, eta);
    const AboResult abo = aboMabo(proposals, gts);
    m.abo = abo.abo;
    m.mabo = abo.mabo;
    m.per_class_abo = abo.per_class;
    for (const auto& p : proposals) ++m.proposals_per_video[p.track.video];
    m.total_proposals = static_cast<int>(proposals.size());
    m.total_ground_truths = static_cast<int>(gts.size());
    return m;
}

}  // namespace actionprop
