#pragma once

#include "famfair/fairness.hpp"
#include "famfair/model.hpp"
#include "famfair/protocols.hpp"

#include <span>
#include <string>

namespace famfair {

/// `display[i]` is the number printed for group i; empty means i+1.

/// "Group 1 seeks ... and has:" preamble listing runs of identical agents.
std::string render_instance_summary(const Instance& instance, std::span<const Criterion> criteria,
                                    std::span<const int> display = {});

/// Human-readable trace of a run recorded with RunOptions::record_trace.
std::string render_run(const Instance& instance, const RunResult& result, std::span<const int> display = {});

/// "{'w', 'x', 'y'}" with goods in index order.
std::string render_bundle(const Instance& instance, Bundle bundle);

}  // namespace famfair
