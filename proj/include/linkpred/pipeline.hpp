#pragma once

#include <vector>

#include "linkpred/evaluation.hpp"
#include "linkpred/katz.hpp"
#include "linkpred/trace_model.hpp"

namespace linkpred {

/// Tensor -> collapse -> score -> evaluate against slice T+1.
struct PipelineConfig {
    WindowConfig window;
    CollapseParams collapse;
    ScoringSpec scoring;
    Regime regime = Regime::all_links;
};

struct PipelineResult {
    SnapshotTensor tensor;
    AdjacencySlice truth;
    CollapsedTensor collapsed;
    ScoreMatrix scores;
    CandidateSet candidates;
};

/// Builds and scores without evaluating.
PipelineResult run_scoring(const std::vector<ContactEvent>& events, std::size_t n, const PipelineConfig& cfg,
                           Exec exec = Exec::parallel);

EvalParams eval_params(const PipelineConfig& cfg, const ScoreMatrix& scores);

/// run_scoring followed by evaluate().
EvalReport run_pipeline(const std::vector<ContactEvent>& events, std::size_t n, const PipelineConfig& cfg,
                        Exec exec = Exec::parallel);

}  // namespace linkpred
