#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blockflow/core/block.hpp"
#include "blockflow/core/diagnostics.hpp"
#include "blockflow/core/signal.hpp"
#include "blockflow/engine/plan.hpp"
#include "blockflow/plugin/registry.hpp"
#include "blockflow/util/csv.hpp"

namespace blockflow::engine {

enum class Pacing { Free, RealTime };

struct LogTarget {
  std::string block;
  int port = 0;
  std::filesystem::path path;
};

struct ParameterOverride {
  std::string block;
  std::string name;
  ParameterValue value;
};

/// Bound at build time: overrides must be in place before initialize runs,
/// so one engine instance serves exactly one configured run.
struct RunConfig {
  /// Number of steps; empty means run until requestStop().
  std::optional<long> steps = 0;
  Pacing pacing = Pacing::Free;
  std::vector<LogTarget> logTargets;
  std::vector<ParameterOverride> overrides;
};

struct PluginRecord {
  std::string name;
  std::string path;
  std::string sha256;
};

struct RunReport {
  long executedSteps = 0;
  double wallTimeSeconds = 0.0;
  long overruns = 0;
  double meanStartErrorSeconds = 0.0;  // RealTime only, else 0
  std::vector<std::pair<std::string, double>> perBlockSeconds;
  std::vector<std::string> overridesApplied;  // "block.param=value"
  std::vector<PluginRecord> plugins;
};

std::string runReportToJson(const RunReport& report);

/// Parses a `block.port=path` command-line argument. On shape errors
/// returns false and fills `error` with what was expected.
bool parseLogTarget(std::string_view text, LogTarget& out,
                    std::string& error);

/// Parses a `block.param=value` command-line argument. The value is read as
/// a JSON scalar or numeric array when it parses as one, and taken as a raw
/// string otherwise, so `--set g.k=2` and `--set src.path=out.csv` both work
/// unquoted.
bool parseOverride(std::string_view text, ParameterOverride& out,
                   std::string& error);

/// The interpreting engine: owns block instances, signal buffers, and the
/// step loop. Built from an ExecutionPlan whose block order is the
/// schedule; stepping is strictly sequential in that order.
///
/// Lifecycle: build() leaves every block initialized. run() steps per the
/// bound config, then terminates every block. An engine destroyed before
/// run() completes still terminates its blocks.
class Engine {
 public:
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Instantiates, declares, resolves, allocates, and initializes. On any
  /// failure returns nullptr with diagnostics; blocks initialized before
  /// the failure point are terminated again (cleanup symmetry).
  static std::unique_ptr<Engine> build(const ExecutionPlan& plan,
                                       plugin::PluginRegistry& registry,
                                       const RunConfig& config,
                                       Diagnostics& diags);

  /// Executes one step: every block's output once, in order, then advances
  /// simulation time. No pacing, no logging. Failure carries the step index
  /// and instance name.
  Status step();

  /// Runs the configured number of steps with pacing and logging, then
  /// terminates all blocks. Problems are both reflected in the returned
  /// report (fewer executed steps) and recorded in runDiagnostics().
  RunReport run();

  /// Requests the run loop to stop at the next step boundary. Safe to call
  /// from another thread or a signal handler.
  void requestStop() { stop_.store(true, std::memory_order_relaxed); }

  long currentStep() const { return stepIndex_; }
  double simTime() const { return simTime_; }

  /// Read access to an output port's current signal, for tests and tools.
  /// Throws std::out_of_range for unknown names/ports.
  SignalReadView outputSignal(std::string_view block, int port) const;

  const Diagnostics& runDiagnostics() const { return runDiags_; }

 private:
  class InstanceContext;
  struct BlockSlot;

  /// One-step-delayed snapshot feeding a non-feedthrough input. Refreshed
  /// from `source` at the end of every step.
  struct ShadowCopy {
    const Signal* source;
    Signal copy;
  };

  Engine() = default;

  bool initializeAll(Diagnostics& diags);
  void terminateAll();
  Status stepOnce();
  int blockIndex(std::string_view name) const;

  ExecutionPlan plan_;
  RunConfig config_;
  std::vector<BlockSlot> slots_;
  std::vector<std::unique_ptr<ShadowCopy>> shadows_;
  std::vector<PluginRecord> plugins_;
  std::vector<std::string> overridesApplied_;

  long stepIndex_ = 0;     // steps completed
  double simTime_ = 0.0;   // stepIndex_ * stepSize at rest; current step's
                           // time while inside stepOnce
  bool terminated_ = false;
  std::atomic<bool> stop_{false};
  Diagnostics runDiags_;
};

}  // namespace blockflow::engine
