#include "levline/detector.hpp"

namespace levline {

DetectionResult detect_segments(const GrayImage& img, const DetectorParams& params) {
    validate_params(params);
    const GrayImage smooth = gaussian_smooth(img);
    const RawGradients grads = sobel(smooth);

    DetectionResult res;
    res.field = build_gradient_field(grads, params.grad_thresh);

    std::vector<Anchor> anchors = extract_anchors(res.field);
    anchors = equalize_anchors(anchors, params.equalize_radius);

    res.chains = draw_edges(res.field, anchors);
    res.chains = refine_chains(std::move(res.chains), params.endpoint_thresh);

    for (const EdgeChain& chain : res.chains) {
        std::vector<LineSegment> segs = extract_segments(chain, res.field, params);
        res.segments.insert(res.segments.end(), segs.begin(), segs.end());
    }
    return res;
}

} // namespace levline
