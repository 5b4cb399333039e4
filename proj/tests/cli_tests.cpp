// Exit-code and file-format contract checks, run against the built binary
// (path supplied via INEQCOND_CLI).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

std::string cli;

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = cli + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

}  // namespace

int main() {
    const char* env = std::getenv("INEQCOND_CLI");
    if (!env) {
        std::cerr << "INEQCOND_CLI not set\n";
        return 1;
    }
    cli = env;

    const std::string dir = "/tmp/ineqcond_cli_test";
    if (std::system(("mkdir -p " + dir).c_str()) != 0) {
        std::cerr << "cannot create work dir\n";
        return 1;
    }

    // Example-1 matrix at eps = 0.1: analyze exits 0 and reports gcc ~ 1.4142136.
    write_file(dir + "/ex1.csv", "20,1,1\n0,-1,1\n");
    {
        auto r = run("analyze --input " + dir + "/ex1.csv");
        expect(r.code == 0, "analyze well-posed exit 0 (got " + std::to_string(r.code) + ")");
        auto j = nlohmann::json::parse(r.out);
        expect(std::abs(j["gcc"].get<double>() - 1.4142136) < 1e-6, "gcc value in report");
        expect(j["feasibility"]["tag"] == "DualStrict", "feasibility tag");
    }

    // Zero column: exit 2 with machine-readable error kind.
    write_file(dir + "/zero.csv", "1,0,0\n0,0,1\n");
    {
        auto r = run("analyze --input " + dir + "/zero.csv");
        expect(r.code == 2, "analyze invalid exit 2 (got " + std::to_string(r.code) + ")");
        auto j = nlohmann::json::parse(r.out);
        expect(j["error"]["kind"] == "ZeroColumn", "error kind ZeroColumn");
    }

    // Ill-posed: exit 3, tag IllPosed.
    write_file(dir + "/ill.csv", "1,-1,0\n0,0,1\n");
    {
        auto r = run("analyze --input " + dir + "/ill.csv");
        expect(r.code == 3, "analyze ill-posed exit 3 (got " + std::to_string(r.code) + ")");
        auto j = nlohmann::json::parse(r.out);
        expect(j["feasibility"]["tag"] == "IllPosed", "ill-posed tag");
    }

    // Unknown flag is a hard error.
    {
        auto r = run("analyze --input " + dir + "/ex1.csv --bogus 1");
        expect(r.code == 2, "unknown flag exit 2 (got " + std::to_string(r.code) + ")");
    }

    // precondition --order bn reproduces the displayed matrix; --order n is
    // idempotent; records round-trip through map-solution.
    {
        auto r = run("precondition --input " + dir + "/ex1.csv --order bn --output " + dir +
                     "/ex1_bn.csv --record " + dir + "/ex1_bn.json");
        expect(r.code == 0, "precondition exit 0");
        std::ifstream f(dir + "/ex1_bn.csv");
        expect(f.good(), "preconditioned matrix written");
        auto rr = run("analyze --input " + dir + "/ex1_bn.csv");
        auto j = nlohmann::json::parse(rr.out);
        expect(std::abs(j["col_ratio"].get<double>() - 1.0) < 1e-10, "bn output has unit columns");
    }
    {
        auto r1 = run("precondition --input " + dir + "/ex1.csv --order n --output " + dir +
                      "/n1.csv");
        auto r2 = run("precondition --input " + dir + "/n1.csv --order n --output " + dir +
                      "/n2.csv");
        expect(r1.code == 0 && r2.code == 0, "normalize twice runs");
        std::ifstream a(dir + "/n1.csv"), b(dir + "/n2.csv");
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        expect(sa.str() == sb.str(), "normalize is idempotent on files");
    }

    // map-solution: dual witness from analyze maps back with a nonnegative
    // margin; a corrupted vector exits 4.
    {
        auto ar = run("analyze --input " + dir + "/ex1_bn.csv");
        auto j = nlohmann::json::parse(ar.out);
        std::ostringstream vec;
        for (const auto& v : j["feasibility"]["witness"]) vec << v.get<double>() << "\n";
        write_file(dir + "/yhat.txt", vec.str());
        auto mr = run("map-solution --record " + dir + "/ex1_bn.json --kind dual --vector " + dir +
                      "/yhat.txt");
        expect(mr.code == 0, "map-solution dual exit 0 (got " + std::to_string(mr.code) + ")");
        auto mj = nlohmann::json::parse(mr.out);
        expect(mj.contains("mapped") && mj.contains("residual"), "map-solution payload");

        write_file(dir + "/bad.txt", "-1\n-1\n");
        auto br = run("map-solution --record " + dir + "/ex1_bn.json --kind dual --vector " + dir +
                      "/bad.txt");
        expect(br.code == 4, "map-solution corrupted exit 4 (got " + std::to_string(br.code) + ")");
    }

    // sweep: shape error exits 2; a small valid sweep exits 0 and emits JSON.
    {
        auto r = run("sweep --m 4 --n 3 --trials 5 --seed 1");
        expect(r.code == 2, "sweep shape error exit 2 (got " + std::to_string(r.code) + ")");
        auto ok = run("sweep --m 2 --n 4 --trials 20 --seed 7");
        expect(ok.code == 0, "sweep exit 0 (got " + std::to_string(ok.code) + ")");
        auto j = nlohmann::json::parse(ok.out);
        expect(j["violations"].get<long>() == 0, "sweep zero violations");
        auto again = run("sweep --m 2 --n 4 --trials 20 --seed 7");
        expect(again.out == ok.out, "sweep output deterministic");
    }

    // verify-paper on a tight grid exercises the fixtures end to end; with an
    // impossible tolerance it must fail.
    {
        auto r = run("verify-paper --eps 0.1 --tol 1e-15");
        expect(r.code == 1, "verify-paper tol 1e-15 exit 1 (got " + std::to_string(r.code) + ")");
    }

    if (failures == 0) std::cout << "cli_tests: all checks passed\n";
    return failures == 0 ? 0 : 1;
}
