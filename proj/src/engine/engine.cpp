#include "blockflow/engine/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "blockflow/graph/validate.hpp"
#include "blockflow/graph/value_json.hpp"
#include "blockflow/util/strings.hpp"

namespace blockflow::engine {

using Clock = std::chrono::steady_clock;

struct Engine::BlockSlot {
  std::unique_ptr<Block> instance;
  std::unique_ptr<InstanceContext> context;
  PortLayout layout;
  std::vector<Signal> outputs;           // one per output port
  std::vector<const Signal*> inputs;     // bound source per input port
  bool initialized = false;
  double seconds = 0.0;  // cumulative time inside output()
};

/// Engine-side BlockContext: parameters from the plan, ports and payloads
/// from the slot. One per block instance, valid for the engine's lifetime.
class Engine::InstanceContext : public BlockContext {
 public:
  InstanceContext(const Engine& engine, int index)
      : engine_(engine), index_(static_cast<std::size_t>(index)) {}

  const Parameter* findParameter(std::string_view name) const override {
    return engine_.plan_.blocks[index_].findParameter(name);
  }
  const Parameter* findConfiguration(std::string_view name) const override {
    for (const Parameter& param : engine_.plan_.configuration) {
      if (param.name == name) return &param;
    }
    return nullptr;
  }
  int inputCount() const override {
    return static_cast<int>(slot().layout.inputs.size());
  }
  int outputCount() const override {
    return static_cast<int>(slot().layout.outputs.size());
  }
  PortSpec inputSpec(int index) const override {
    checkRange(index, inputCount(), "input");
    return slot().layout.inputs[static_cast<std::size_t>(index)];
  }
  PortSpec outputSpec(int index) const override {
    checkRange(index, outputCount(), "output");
    return slot().layout.outputs[static_cast<std::size_t>(index)];
  }
  SignalReadView input(int index) const override {
    checkRange(index, inputCount(), "input");
    return slot().inputs[static_cast<std::size_t>(index)]->cview();
  }
  SignalView output(int index) override {
    checkRange(index, outputCount(), "output");
    return const_cast<Engine&>(engine_)
        .slots_[index_]
        .outputs[static_cast<std::size_t>(index)]
        .view();
  }
  double stepSize() const override { return engine_.plan_.stepSize; }
  double simTime() const override { return engine_.simTime_; }

 private:
  const BlockSlot& slot() const { return engine_.slots_[index_]; }
  static void checkRange(int index, int count, const char* kind) {
    if (index < 0 || index >= count) {
      throw std::logic_error("no " + std::string(kind) + " port " +
                             std::to_string(index));
    }
  }

  const Engine& engine_;
  std::size_t index_;
};

namespace {

/// Lifecycle calls must not leak exceptions into the step loop.
template <typename Call>
Status guarded(Call&& call) {
  try {
    return call();
  } catch (const std::exception& e) {
    return Status::failure(e.what());
  } catch (...) {
    return Status::failure("unexpected exception");
  }
}

std::string describeTarget(const LogTarget& target) {
  return target.block + "." + std::to_string(target.port);
}

}  // namespace

Engine::~Engine() { terminateAll(); }

int Engine::blockIndex(std::string_view name) const {
  for (std::size_t i = 0; i < plan_.blocks.size(); ++i) {
    if (plan_.blocks[i].instanceName == name) return static_cast<int>(i);
  }
  return -1;
}

std::unique_ptr<Engine> Engine::build(const ExecutionPlan& plan,
                                      plugin::PluginRegistry& registry,
                                      const RunConfig& config,
                                      Diagnostics& diags) {
  auto engine = std::unique_ptr<Engine>(new Engine());
  engine->plan_ = plan;
  engine->config_ = config;

  if (config.steps.has_value() && *config.steps < 0) {
    diags.error(DiagCategory::Model, "engine.bad_config",
                "step count must be non-negative, got " +
                    std::to_string(*config.steps));
    return nullptr;
  }
  if (config.pacing == Pacing::RealTime && plan.stepSize < 0.001) {
    diags.error(DiagCategory::Model, "engine.bad_config",
                "realtime pacing requires stepSize >= 1 ms, model has " +
                    std::to_string(plan.stepSize) + " s");
    return nullptr;
  }

  // Overrides replace (or add) parameters before any block sees them.
  for (const ParameterOverride& over : config.overrides) {
    const int index = engine->blockIndex(over.block);
    if (index < 0) {
      diags.error(DiagCategory::Model, "engine.bad_override",
                  "--set targets unknown block '" + over.block + "'");
      return nullptr;
    }
    auto& params = engine->plan_.blocks[static_cast<std::size_t>(index)].parameters;
    auto it = std::find_if(params.begin(), params.end(),
                           [&](const Parameter& p) { return p.name == over.name; });
    if (it != params.end()) {
      it->value = over.value;
    } else {
      params.push_back({over.name, over.value});
      std::sort(params.begin(), params.end(),
                [](const Parameter& a, const Parameter& b) {
                  return a.name < b.name;
                });
    }
    engine->overridesApplied_.push_back(over.block + "." + over.name + "=" +
                                        parameterValueText(over.value));
  }

  const std::size_t n = engine->plan_.blocks.size();
  engine->slots_.resize(n);

  // Instantiate and declare; abort on the first failure (the aggregating
  // pass is validate's job, build is expected to run on validated input).
  std::vector<std::string> names;
  std::vector<PortLayout> layouts(n);
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const graph::BlockDescriptor& block = engine->plan_.blocks[i];
    names.push_back(block.instanceName);
    engine->slots_[i].instance =
        registry.instantiate(block.libraryName, block.classLabel, diags);
    if (!engine->slots_[i].instance) return nullptr;
    if (!graph::declarePorts(*engine->slots_[i].instance, block,
                             engine->plan_.configuration, engine->plan_.stepSize,
                             layouts[i], diags)) {
      return nullptr;
    }
  }

  // Wires must fit the declared layouts even when the plan came from baked
  // tables rather than a validated model.
  for (const graph::Wire& wire : engine->plan_.wires) {
    const bool blocksOk =
        wire.fromBlock >= 0 && wire.fromBlock < static_cast<int>(n) &&
        wire.toBlock >= 0 && wire.toBlock < static_cast<int>(n);
    const bool portsOk =
        blocksOk &&
        wire.fromPort >= 0 &&
        wire.fromPort < static_cast<int>(
                            layouts[static_cast<std::size_t>(wire.fromBlock)]
                                .outputs.size()) &&
        wire.toPort >= 0 &&
        wire.toPort < static_cast<int>(
                          layouts[static_cast<std::size_t>(wire.toBlock)]
                              .inputs.size());
    if (!portsOk) {
      diags.error(DiagCategory::Model, "engine.bad_plan",
                  "execution plan wire references a port that does not exist");
      return nullptr;
    }
  }

  if (!graph::resolveWidths(names, layouts, engine->plan_.wires, diags)) {
    return nullptr;
  }

  // Allocate signals and bind inputs. A wire into a direct-feedthrough
  // input reads the producer's signal; a wire into a non-feedthrough input
  // reads a shadow copy refreshed at the end of each step, so the consumer
  // always observes the previous step's value whatever the schedule order.
  for (std::size_t i = 0; i < n; ++i) {
    BlockSlot& slot = engine->slots_[i];
    slot.layout = layouts[i];
    slot.outputs.reserve(slot.layout.outputs.size());
    for (const PortSpec& spec : slot.layout.outputs) {
      slot.outputs.emplace_back(spec.dtype, spec.width);
    }
    slot.inputs.assign(slot.layout.inputs.size(), nullptr);
  }
  for (const graph::Wire& wire : engine->plan_.wires) {
    BlockSlot& consumer = engine->slots_[static_cast<std::size_t>(wire.toBlock)];
    Signal& source = engine->slots_[static_cast<std::size_t>(wire.fromBlock)]
                         .outputs[static_cast<std::size_t>(wire.fromPort)];
    const PortSpec& input =
        consumer.layout.inputs[static_cast<std::size_t>(wire.toPort)];
    if (input.directFeedthrough) {
      consumer.inputs[static_cast<std::size_t>(wire.toPort)] = &source;
    } else {
      engine->shadows_.push_back(std::make_unique<ShadowCopy>(ShadowCopy{
          &source, Signal(source.dtype(), source.width())}));
      consumer.inputs[static_cast<std::size_t>(wire.toPort)] =
          &engine->shadows_.back()->copy;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    engine->slots_[i].context =
        std::make_unique<InstanceContext>(*engine, static_cast<int>(i));
  }

  // Record the identity of every library this plan loads.
  std::set<std::string> recorded;
  for (const graph::BlockDescriptor& block : engine->plan_.blocks) {
    if (!recorded.insert(block.libraryName).second) continue;
    if (const plugin::LoadedPlugin* info = registry.find(block.libraryName)) {
      engine->plugins_.push_back({info->name, info->path, info->sha256});
    }
  }

  if (!engine->initializeAll(diags)) return nullptr;
  return engine;
}

bool Engine::initializeAll(Diagnostics& diags) {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    BlockSlot& slot = slots_[i];
    const Status status =
        guarded([&] { return slot.instance->initialize(*slot.context); });
    if (!status.ok()) {
      diags.error(DiagCategory::Model, "engine.initialize_failed",
                  "block '" + plan_.blocks[i].instanceName +
                      "' failed to initialize: " + status.message,
                  plan_.blocks[i].instanceName);
      // Cleanup symmetry: blocks initialized so far get their terminate.
      for (std::size_t j = i; j-- > 0;) {
        const Status cleanup = guarded(
            [&] { return slots_[j].instance->terminate(*slots_[j].context); });
        if (!cleanup.ok()) {
          diags.warning(DiagCategory::Runtime, "engine.terminate_failed",
                        "block '" + plan_.blocks[j].instanceName +
                            "' failed to terminate during cleanup: " +
                            cleanup.message,
                        plan_.blocks[j].instanceName);
        }
      }
      terminated_ = true;  // nothing left to terminate
      return false;
    }
    slot.initialized = true;
  }
  return true;
}

void Engine::terminateAll() {
  if (terminated_) return;
  terminated_ = true;
  for (std::size_t i = slots_.size(); i-- > 0;) {
    if (!slots_[i].initialized) continue;
    const Status status = guarded(
        [&] { return slots_[i].instance->terminate(*slots_[i].context); });
    if (!status.ok()) {
      runDiags_.error(DiagCategory::Runtime, "engine.terminate_failed",
                      "block '" + plan_.blocks[i].instanceName +
                          "' failed to terminate: " + status.message,
                      plan_.blocks[i].instanceName);
    }
  }
}

Status Engine::step() {
  if (terminated_) {
    return Status::failure("engine is already terminated");
  }
  return stepOnce();
}

Status Engine::stepOnce() {
  const long k = stepIndex_;
  simTime_ = static_cast<double>(k) * plan_.stepSize;

  for (std::size_t i = 0; i < slots_.size(); ++i) {
    BlockSlot& slot = slots_[i];
    const auto before = Clock::now();
    const Status status =
        guarded([&] { return slot.instance->output(*slot.context); });
    slot.seconds += std::chrono::duration<double>(Clock::now() - before).count();
    if (!status.ok()) {
      return Status::failure("block '" + plan_.blocks[i].instanceName +
                             "' failed at step " + std::to_string(k) + ": " +
                             status.message);
    }
    if (slot.layout.finiteOutputs) {
      for (const Signal& signal : slot.outputs) {
        if (signal.dtype() != DataType::Float64) continue;
        for (double value : signal.cview().f64()) {
          if (!std::isfinite(value)) {
            return Status::failure(
                "block '" + plan_.blocks[i].instanceName +
                "' produced a non-finite value at step " + std::to_string(k));
          }
        }
      }
    }
  }

  // Refresh delayed snapshots for non-feedthrough consumers.
  for (const auto& shadow : shadows_) {
    std::memcpy(shadow->copy.view().raw(), shadow->source->cview().raw(),
                dataTypeSize(shadow->source->dtype()) *
                    static_cast<std::size_t>(shadow->source->width()));
  }

  stepIndex_ = k + 1;
  simTime_ = static_cast<double>(stepIndex_) * plan_.stepSize;
  return Status::success();
}

RunReport Engine::run() {
  RunReport report;
  report.overridesApplied = overridesApplied_;
  report.plugins = plugins_;

  struct OpenLog {
    util::CsvWriter writer;
    const Signal* signal = nullptr;
    std::filesystem::path path;
  };
  std::vector<OpenLog> logs;
  bool logsOk = true;
  for (const LogTarget& target : config_.logTargets) {
    const int index = blockIndex(target.block);
    if (index < 0) {
      runDiags_.error(DiagCategory::Model, "engine.bad_log_target",
                      "--log targets unknown block '" + target.block + "'");
      logsOk = false;
      continue;
    }
    const BlockSlot& slot = slots_[static_cast<std::size_t>(index)];
    if (target.port < 0 ||
        target.port >= static_cast<int>(slot.outputs.size())) {
      runDiags_.error(DiagCategory::Model, "engine.bad_log_target",
                      "--log target '" + describeTarget(target) +
                          "' is out of range; block has " +
                          std::to_string(slot.outputs.size()) + " output(s)");
      logsOk = false;
      continue;
    }
    const Signal& signal =
        slot.outputs[static_cast<std::size_t>(target.port)];
    if (signal.dtype() != DataType::Float64) {
      runDiags_.error(DiagCategory::Model, "engine.bad_log_target",
                      "--log target '" + describeTarget(target) +
                          "' carries " +
                          std::string(dataTypeName(signal.dtype())) +
                          "; only float64 ports can be logged");
      logsOk = false;
      continue;
    }
    OpenLog log;
    log.signal = &signal;
    log.path = target.path;
    if (!log.writer.open(target.path, signal.width())) {
      runDiags_.error(DiagCategory::Io, "io.write_failed",
                      "cannot create log file '" + target.path.string() + "'");
      logsOk = false;
      continue;
    }
    logs.push_back(std::move(log));
  }
  if (!logsOk) {
    terminateAll();
    return report;
  }

  const auto start = Clock::now();
  const auto dt = std::chrono::nanoseconds(
      static_cast<long long>(std::llround(plan_.stepSize * 1e9)));
  const bool realtime = config_.pacing == Pacing::RealTime;
  long double startErrorSum = 0.0L;

  while (true) {
    if (stop_.load(std::memory_order_relaxed)) break;
    if (config_.steps.has_value() && stepIndex_ >= *config_.steps) break;

    const long k = stepIndex_;
    if (realtime) {
      const auto scheduled = start + k * dt;
      const auto now = Clock::now();
      if (now > scheduled) {
        startErrorSum +=
            std::chrono::duration<double>(now - scheduled).count();
      }
    }

    const Status status = stepOnce();
    if (!status.ok()) {
      runDiags_.error(DiagCategory::Runtime, "engine.step_failed",
                      status.message);
      break;
    }

    const double rowTime = static_cast<double>(k) * plan_.stepSize;
    for (OpenLog& log : logs) {
      log.writer.writeRow(rowTime, log.signal->cview().f64());
    }

    if (realtime) {
      const auto deadline = start + (k + 1) * dt;
      if (Clock::now() > deadline) {
        ++report.overruns;
      } else {
        std::this_thread::sleep_until(deadline);
      }
    }
  }

  report.wallTimeSeconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  report.executedSteps = stepIndex_;
  if (realtime && stepIndex_ > 0) {
    report.meanStartErrorSeconds =
        static_cast<double>(startErrorSum / stepIndex_);
  }
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    report.perBlockSeconds.emplace_back(plan_.blocks[i].instanceName,
                                        slots_[i].seconds);
  }

  for (OpenLog& log : logs) {
    if (!log.writer.close()) {
      runDiags_.error(DiagCategory::Io, "io.write_failed",
                      "cannot finalize log file '" + log.path.string() + "'");
    }
  }
  terminateAll();
  return report;
}

SignalReadView Engine::outputSignal(std::string_view block, int port) const {
  const int index = blockIndex(block);
  if (index < 0) {
    throw std::out_of_range("no block named '" + std::string(block) + "'");
  }
  const BlockSlot& slot = slots_[static_cast<std::size_t>(index)];
  if (port < 0 || port >= static_cast<int>(slot.outputs.size())) {
    throw std::out_of_range("block '" + std::string(block) +
                            "' has no output " + std::to_string(port));
  }
  return slot.outputs[static_cast<std::size_t>(port)].cview();
}

bool parseLogTarget(std::string_view text, LogTarget& out,
                    std::string& error) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq + 1 == text.size()) {
    error = "expected 'block.port=path', got '" + std::string(text) + "'";
    return false;
  }
  if (!util::parsePortRef(text.substr(0, eq), out.block, out.port)) {
    error = "expected 'block.port=path' with a non-negative port, got '" +
            std::string(text) + "'";
    return false;
  }
  out.path = std::string(text.substr(eq + 1));
  return true;
}

bool parseOverride(std::string_view text, ParameterOverride& out,
                   std::string& error) {
  const auto eq = text.find('=');
  const auto dot = text.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos ||
      dot == 0 || dot + 1 >= eq) {
    error = "expected 'block.param=value', got '" + std::string(text) + "'";
    return false;
  }
  out.block = std::string(text.substr(0, dot));
  out.name = std::string(text.substr(dot + 1, eq - dot - 1));
  const std::string value(text.substr(eq + 1));
  const nlohmann::json parsed =
      nlohmann::json::parse(value, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_discarded() && graph::valueFromJson(parsed, out.value)) {
    return true;
  }
  out.value = value;
  return true;
}

std::string runReportToJson(const RunReport& report) {
  nlohmann::json doc;
  doc["executed_steps"] = report.executedSteps;
  doc["wall_time_seconds"] = report.wallTimeSeconds;
  doc["overruns"] = report.overruns;
  doc["mean_start_error_seconds"] = report.meanStartErrorSeconds;
  doc["per_block_seconds"] = nlohmann::json::object();
  for (const auto& [name, seconds] : report.perBlockSeconds) {
    doc["per_block_seconds"][name] = seconds;
  }
  doc["overrides"] = report.overridesApplied;
  doc["plugins"] = nlohmann::json::array();
  for (const PluginRecord& plugin : report.plugins) {
    doc["plugins"].push_back({{"name", plugin.name},
                              {"path", plugin.path},
                              {"sha256", plugin.sha256}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace blockflow::engine
