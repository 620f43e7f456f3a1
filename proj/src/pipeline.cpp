#include "linkpred/pipeline.hpp"

namespace linkpred {

PipelineResult run_scoring(const std::vector<ContactEvent>& events, std::size_t n, const PipelineConfig& cfg,
                           Exec exec)
{
    SnapshotTensor tensor = build_tensor(events, cfg.window, n);
    AdjacencySlice truth = ground_truth_slice(events, cfg.window, n);
    CollapsedTensor x = collapse(tensor, cfg.collapse);
    ScoreMatrix s = score(x, cfg.scoring, exec);
    CandidateSet cand = CandidateSet::for_regime(cfg.regime, tensor);
    return {std::move(tensor), std::move(truth), std::move(x), std::move(s), std::move(cand)};
}

EvalParams eval_params(const PipelineConfig& cfg, const ScoreMatrix& scores)
{
    EvalParams p;
    p.method = scores.provenance.label();
    p.theta = cfg.collapse.theta;
    p.beta = cfg.scoring.beta;
    p.khop = scores.provenance.khop;
    p.slice_count = cfg.window.slice_count;
    p.slice_duration = cfg.window.slice_duration;
    p.origin = cfg.window.origin;
    return p;
}

EvalReport run_pipeline(const std::vector<ContactEvent>& events, std::size_t n, const PipelineConfig& cfg, Exec exec)
{
    auto r = run_scoring(events, n, cfg, exec);
    return evaluate(r.scores.s, r.truth, r.candidates, eval_params(cfg, r.scores));
}

}  // namespace linkpred
