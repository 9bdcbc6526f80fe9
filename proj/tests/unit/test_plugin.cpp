#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>
#include <vector>

#include "blockflow/plugin/registry.hpp"
#include "blockflow/util/sha256.hpp"
#include "mock_context.hpp"

using namespace blockflow;
using namespace blockflow::plugin;

namespace {

void addStdPath(PluginRegistry& r) { r.addSearchPath(BLOCKFLOW_STDBLOCKS_DIR); }
void addTestPath(PluginRegistry& r) {
  r.addSearchPath(BLOCKFLOW_TESTBLOCKS_DIR);
}

}  // namespace

TEST_CASE("discover reports every probed path on failure") {
  PluginRegistry registry;
  registry.addSearchPath("/opt/missing");
  Diagnostics diags;
  auto path = registry.discover("ghostlib", diags);
  CHECK(path.empty());
  REQUIRE(diags.hasCode("plugin.not_found"));
  const std::string& msg = diags.items()[0].message;
  CHECK(msg.find("/opt/missing/libghostlib.so") != std::string::npos);
  CHECK(msg.find("/opt/missing/ghostlib.so") != std::string::npos);
}

TEST_CASE("discover with no search paths says so") {
  PluginRegistry registry;
  Diagnostics diags;
  (void)registry.discover("x", diags);
  CHECK(diags.items()[0].message.find("no search paths configured") !=
        std::string::npos);
}

TEST_CASE("loading stdblocks yields a sorted manifest and a digest") {
  PluginRegistry registry;
  addStdPath(registry);
  Diagnostics diags;
  const LoadedPlugin* info = registry.load("stdblocks", diags);
  REQUIRE(info != nullptr);
  CHECK(diags.empty());
  CHECK(info->name == "stdblocks");
  CHECK(info->manifest.abiVersion == 1);
  const std::vector<std::string> expected{
      "Constant", "CsvSink",    "DiscreteFilter", "Gain",
      "PID",      "Pendulum",   "Saturation",     "SineSource",
      "StepSource", "Sum",      "UnitDelay"};
  CHECK(info->manifest.labels == expected);
  CHECK(info->manifest.hasLabel("Gain"));
  CHECK_FALSE(info->manifest.hasLabel("gain"));

  auto fileDigest = util::sha256File(info->path);
  REQUIRE(fileDigest.has_value());
  CHECK(info->sha256 == *fileDigest);
}

TEST_CASE("load caches the entry for repeated requests") {
  PluginRegistry registry;
  addStdPath(registry);
  Diagnostics diags;
  const LoadedPlugin* first = registry.load("stdblocks", diags);
  const LoadedPlugin* second = registry.load("stdblocks", diags);
  CHECK(first == second);
  CHECK(registry.find("stdblocks") == first);
  CHECK(registry.find("never_loaded") == nullptr);
}

TEST_CASE("a library without the entry symbols is rejected") {
  PluginRegistry registry;
  addTestPath(registry);
  Diagnostics diags;
  CHECK(registry.load("nosymbols", diags) == nullptr);
  CHECK(diags.hasCode("plugin.missing_symbol"));
  CHECK(diags.items()[0].message.find("blockflow_plugin_manifest") !=
        std::string::npos);
}

TEST_CASE("an ABI version mismatch names both versions") {
  PluginRegistry registry;
  addTestPath(registry);
  Diagnostics diags;
  CHECK(registry.load("abimismatch", diags) == nullptr);
  REQUIRE(diags.hasCode("plugin.abi_mismatch"));
  const std::string& msg = diags.items()[0].message;
  CHECK(msg.find("plugin ABI 99") != std::string::npos);
  CHECK(msg.find("host ABI 1") != std::string::npos);
}

TEST_CASE("unknown labels come with a suggestion") {
  PluginRegistry registry;
  addStdPath(registry);
  Diagnostics diags;
  CHECK(registry.instantiate("stdblocks", "Gian", diags) == nullptr);
  REQUIRE(diags.hasCode("plugin.unknown_label"));
  const std::string& msg = diags.items()[0].message;
  CHECK(msg.find("did you mean 'Gain'?") != std::string::npos);
  CHECK(msg.find("available:") != std::string::npos);
}

TEST_CASE("a factory returning nothing is a factory failure") {
  PluginRegistry registry;
  addTestPath(registry);
  Diagnostics diags;
  CHECK(registry.instantiate("testblocks", "NullFactory", diags) == nullptr);
  CHECK(diags.hasCode("plugin.factory_failed"));
}

TEST_CASE("instantiated blocks work through the C boundary") {
  PluginRegistry registry;
  addStdPath(registry);
  Diagnostics diags;
  auto block = registry.instantiate("stdblocks", "Gain", diags);
  REQUIRE(block != nullptr);
  REQUIRE(diags.empty());

  testsupport::MockContext ctx;
  ctx.param("k", 2.5);
  ctx.start(*block, 3);
  auto in = ctx.inputF64(0);
  in[0] = 1.0;
  in[1] = -2.0;
  in[2] = 4.0;
  REQUIRE(ctx.step(*block).ok());
  auto out = ctx.outputF64(0);
  CHECK(out[0] == 2.5);
  CHECK(out[1] == -5.0);
  CHECK(out[2] == 10.0);
  CHECK(ctx.terminate(*block).ok());
}

TEST_CASE("exceptions thrown inside a plugin become status failures") {
  PluginRegistry registry;
  addTestPath(registry);
  Diagnostics diags;

  auto failing = registry.instantiate("testblocks", "Thrower", diags);
  REQUIRE(failing != nullptr);
  testsupport::MockContext ctx;
  ctx.param("stage", std::string{"initialize"});
  REQUIRE(ctx.declare(*failing).ok());
  ctx.resolve(1);
  Status status = ctx.initialize(*failing);
  CHECK_FALSE(status.ok());
  CHECK(status.message.find("intentional failure in initialize") !=
        std::string::npos);
}

TEST_CASE("exceptions during output cross the boundary as failures") {
  PluginRegistry registry;
  addTestPath(registry);
  Diagnostics diags;
  auto failing = registry.instantiate("testblocks", "Thrower", diags);
  REQUIRE(failing != nullptr);
  testsupport::MockContext ctx;
  ctx.param("stage", std::string{"output"});
  ctx.start(*failing, 1);
  Status status = ctx.step(*failing);
  CHECK_FALSE(status.ok());
  CHECK(status.message.find("intentional failure in output") !=
        std::string::npos);
}

TEST_CASE("search paths from the environment are honored") {
  ::setenv("BLOCKFLOW_PLUGIN_PATH",
           BLOCKFLOW_STDBLOCKS_DIR ":" BLOCKFLOW_TESTBLOCKS_DIR, 1);
  PluginRegistry registry;
  registry.addSearchPathsFromEnv();
  ::unsetenv("BLOCKFLOW_PLUGIN_PATH");
  CHECK(registry.searchPaths().size() == 2);
  Diagnostics diags;
  CHECK(registry.load("stdblocks", diags) != nullptr);
  CHECK(registry.load("testblocks", diags) != nullptr);
  CHECK(diags.empty());
}

TEST_CASE("two instances of one label are independent") {
  PluginRegistry registry;
  addStdPath(registry);
  Diagnostics diags;
  auto a = registry.instantiate("stdblocks", "UnitDelay", diags);
  auto b = registry.instantiate("stdblocks", "UnitDelay", diags);
  REQUIRE(a != nullptr);
  REQUIRE(b != nullptr);

  testsupport::MockContext ctxA, ctxB;
  ctxA.param("x0", 5.0);
  ctxB.param("x0", 7.0);
  ctxA.start(*a, 1);
  ctxB.start(*b, 1);
  ctxA.inputF64(0)[0] = 100.0;
  ctxB.inputF64(0)[0] = 200.0;
  REQUIRE(ctxA.step(*a).ok());
  REQUIRE(ctxB.step(*b).ok());
  CHECK(ctxA.outputF64(0)[0] == 5.0);  // first step emits x0
  CHECK(ctxB.outputF64(0)[0] == 7.0);
  REQUIRE(ctxA.step(*a).ok());
  CHECK(ctxA.outputF64(0)[0] == 100.0);
}
