#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ctrain/dataset.hpp"
#include "ctrain/mlp.hpp"
#include "ctrain/model_io.hpp"
#include "ctrain/rng.hpp"
#include "ctrain/text.hpp"
#include "test_util.hpp"

using nlohmann::json;
using namespace ctrain;
using test::TempDir;
using test::write_file;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

RunResult run_tool(const std::string& args) {
    const std::string command = std::string(CTRAIN_TOOL) + " " + args + " 2>&1";
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return result;
    char buffer[4096];
    while (std::size_t got = fread(buffer, 1, sizeof(buffer), pipe))
        result.output.append(buffer, got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// 60-row linearly separable dataset, quick to train on.
std::filesystem::path write_blobs(const TempDir& dir) {
    std::ostringstream csv;
    csv << "x,y,label\n";
    Rng rng(99);
    for (int i = 0; i < 60; ++i) {
        const int label = i % 2;
        const double sign = label == 0 ? -1.0 : 1.0;
        csv << format_double(sign * 3.0 + rng.uniform(-1.0, 1.0)) << ','
            << format_double(sign * 3.0 + rng.uniform(-1.0, 1.0)) << ',' << label
            << '\n';
    }
    return write_file(dir.file("blobs.csv"), csv.str());
}

}  // namespace

TEST(CliAugmentTest, WritesEncodedCsvWithExpectedShape) {
    TempDir dir;
    const auto data = write_blobs(dir);
    const auto out = dir.file("enc.csv");
    const auto r = run_tool("augment --data " + data.string() +
                            " --spec 10A/0I/0.1 --seed 7 --out " + out.string());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("600 rows, 5 columns"), std::string::npos) << r.output;

    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "v_1,v_2,m_1,m_2,label");

    // Manifest sidecar parses and echoes the arguments.
    const auto manifest = json::parse(slurp(out.string() + ".manifest.json"));
    EXPECT_EQ(manifest["command"], "augment");
    EXPECT_EQ(manifest["config"]["spec"], "10A/0I/0.1");
    EXPECT_EQ(manifest["config"]["seed"], 7);
}

TEST(CliAugmentTest, InjectionWidensTheEncodedFile) {
    TempDir dir;
    const auto iris = test::data_dir() / "iris.csv";
    const auto out = dir.file("enc.csv");
    const auto r = run_tool("augment --data " + iris.string() +
                            " --spec 10A/0I/0.1 --irrelevant 20 --seed 7 --out " +
                            out.string());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    // 150 rows * 10 copies; 2 * (4 + 20) + 1 columns.
    EXPECT_NE(r.output.find("1500 rows, 49 columns"), std::string::npos) << r.output;
}

TEST(CliAugmentTest, ReRunIsByteIdentical) {
    TempDir dir;
    const auto data = write_blobs(dir);
    const auto cmd = [&](const std::string& name) {
        return "augment --data " + data.string() + " --spec 2A/1I/0.3 --seed 11 --out " +
               dir.file(name).string();
    };
    ASSERT_EQ(run_tool(cmd("a.csv")).exit_code, 0);
    ASSERT_EQ(run_tool(cmd("b.csv")).exit_code, 0);
    EXPECT_EQ(slurp(dir.file("a.csv")), slurp(dir.file("b.csv")));
}

TEST(CliAugmentTest, ExitCodes) {
    TempDir dir;
    const auto data = write_blobs(dir);

    // Grammar violation names the bound and exits 2.
    auto r = run_tool("augment --data " + data.string() +
                      " --spec 10A/0I/1.5 --seed 1 --out " + dir.file("x.csv").string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.output.find("[0, 1]"), std::string::npos) << r.output;

    // Missing required flag: 2.
    r = run_tool("augment --data " + data.string() + " --spec 1A/0I/0.1 --out " +
                 dir.file("x.csv").string());
    EXPECT_EQ(r.exit_code, 2);

    // Unreadable dataset: 1.
    r = run_tool("augment --data " + dir.file("nope.csv").string() +
                 " --spec 1A/0I/0.1 --seed 1 --out " + dir.file("x.csv").string());
    EXPECT_EQ(r.exit_code, 1);

    // Unknown subcommand: 2.
    EXPECT_EQ(run_tool("frobnicate").exit_code, 2);
}

TEST(CliExperimentTest, WritesReportAndIsReproducible) {
    TempDir dir;
    const auto data = write_blobs(dir);
    const auto base = "experiment --data " + data.string() +
                      " --spec 1A/1I/0.1 --trials 3 --seed 42 --max-iter 100";

    auto r = run_tool(base + " --out " + dir.file("r1.json").string() + " --csv-out " +
                      dir.file("t1.csv").string());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("median usual"), std::string::npos);
    EXPECT_NE(r.output.find("median improvement"), std::string::npos);

    const auto report = json::parse(slurp(dir.file("r1.json")));
    EXPECT_EQ(report["config"]["trials"], 3);
    EXPECT_EQ(report["trials"].size(), 3u);
    EXPECT_TRUE(report["summary"].contains("median_improvement"));
    for (const auto& trial : report["trials"]) {
        const double usual = trial["acc_usual"];
        const double cont = trial["acc_contingency"];
        EXPECT_GE(usual, 0.0);
        EXPECT_LE(usual, 1.0);
        EXPECT_GE(cont, 0.0);
        EXPECT_LE(cont, 1.0);
    }

    // The report's config echo matches the manifest's exactly.
    const auto manifest = json::parse(slurp(dir.file("r1.json").string() + ".manifest.json"));
    EXPECT_EQ(manifest["config"], report["config"]);

    // Identical arguments reproduce the report byte for byte, jobs included.
    r = run_tool(base + " --out " + dir.file("r2.json").string() + " --jobs 3");
    ASSERT_EQ(r.exit_code, 0) << r.output;
    auto first = json::parse(slurp(dir.file("r1.json")));
    auto second = json::parse(slurp(dir.file("r2.json")));
    first["config"].erase("jobs");
    second["config"].erase("jobs");
    EXPECT_EQ(first, second);

    const auto csv = slurp(dir.file("t1.csv"));
    EXPECT_NE(csv.find("index,seed,acc_usual"), std::string::npos);
}

TEST(CliExperimentTest, ExitCodes) {
    TempDir dir;
    const auto data = write_blobs(dir);
    EXPECT_EQ(run_tool("experiment --data " + data.string() +
                       " --spec 1A/0I/0.1 --trials 0 --seed 1")
                  .exit_code,
              2);
    EXPECT_EQ(run_tool("experiment --data " + data.string() +
                       " --spec 1A/0I/0.1 --trials 2 --seed 1 --split 1.2")
                  .exit_code,
              2);
    // --seed is required: silent nondeterminism is not an option.
    EXPECT_EQ(run_tool("experiment --data " + data.string() +
                       " --spec 1A/0I/0.1 --trials 2")
                  .exit_code,
              2);
    EXPECT_EQ(run_tool("experiment --data " + data.string() +
                       " --spec 1A/0I/0.1 --trials 2 --seed 1 --loss huber")
                  .exit_code,
              2);
}

TEST(CliTrainPredictTest, RoundTripReportsMatchingAccuracy) {
    TempDir dir;
    const auto data = write_blobs(dir);
    const auto model_path = dir.file("model.bin");

    auto r = run_tool("train --data " + data.string() + " --seed 5 --max-iter 200 --out " +
                      model_path.string());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("objective"), std::string::npos);

    r = run_tool("predict --data " + data.string() + " --model " + model_path.string());
    ASSERT_EQ(r.exit_code, 0) << r.output;

    // 60 prediction lines followed by the accuracy line.
    std::istringstream lines(r.output);
    std::string line, last;
    int prediction_lines = 0;
    while (std::getline(lines, line)) {
        if (line.rfind("accuracy ", 0) == 0)
            last = line;
        else if (!line.empty())
            ++prediction_lines;
    }
    EXPECT_EQ(prediction_lines, 60);
    ASSERT_FALSE(last.empty());

    // The printed accuracy equals an independent evaluation of the model.
    const auto model = load_model(model_path);
    const auto d = load_csv(data, CsvSchema::with_defaults());
    const double expected = accuracy(model.parameters, d.features, d.labels);
    EXPECT_EQ(last, "accuracy " + format_double(expected));
}

TEST(CliTrainPredictTest, MaskTrainedModelEncodesRawRows) {
    TempDir dir;
    const auto data = write_blobs(dir);
    const auto model_path = dir.file("masked.bin");

    auto r = run_tool("train --data " + data.string() +
                      " --spec 2A/1I/0.2 --seed 5 --max-iter 200 --out " +
                      model_path.string());
    ASSERT_EQ(r.exit_code, 0) << r.output;

    const auto model = load_model(model_path);
    EXPECT_EQ(model.config.n_inputs, 4);  // 2 * nv

    r = run_tool("predict --data " + data.string() + " --model " + model_path.string() +
                 " --out " + dir.file("pred.txt").string());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("accuracy "), std::string::npos);

    std::ifstream pred(dir.file("pred.txt"));
    int count = 0;
    std::string line;
    while (std::getline(pred, line))
        if (!line.empty()) ++count;
    EXPECT_EQ(count, 60);
}

TEST(CliTrainPredictTest, WrongWidthExitsOne) {
    TempDir dir;
    const auto data = write_blobs(dir);
    const auto model_path = dir.file("model.bin");
    ASSERT_EQ(run_tool("train --data " + data.string() + " --seed 5 --max-iter 50 --out " +
                       model_path.string())
                  .exit_code,
              0);

    const auto wide = write_file(dir.file("wide.csv"),
                                 "a,b,c,d,e,label\n1,2,3,4,5,0\n6,7,8,9,10,1\n");
    const auto r = run_tool("predict --data " + wide.string() + " --model " +
                            model_path.string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("dimension"), std::string::npos) << r.output;
}

TEST(CliTrainPredictTest, FeatureOnlyInputWithNoLabelFlag) {
    TempDir dir;
    const auto data = write_blobs(dir);
    const auto model_path = dir.file("model.bin");
    ASSERT_EQ(run_tool("train --data " + data.string() + " --seed 5 --max-iter 50 --out " +
                       model_path.string())
                  .exit_code,
              0);

    const auto features = write_file(dir.file("features.csv"), "x,y\n3,3\n-3,-3\n");
    const auto r = run_tool("predict --data " + features.string() + " --no-label --model " +
                            model_path.string());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_EQ(r.output.find("accuracy"), std::string::npos);  // no labels, no accuracy
}
