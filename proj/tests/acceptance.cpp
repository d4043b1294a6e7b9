#include <cstdio>
#include <fstream>
#include <iostream>

#include "cherenkov/errors.hpp"
#include "cherenkov/experiments.hpp"

using namespace cherenkov;

int main(int argc, char** argv)
{
    std::string dir = argc > 1 ? argv[1] : "configs";
    try {
        SuiteInputs in = load_suite_inputs(dir);
        std::vector<CriterionResult> results = run_suite(in, true);
        bool ok = true;
        for (const CriterionResult& r : results) {
            std::cout << criterion_line(r) << "\n";
            ok = ok && r.pass && (r.budget <= 0.0 || r.seconds <= r.budget);
        }
        if (argc > 2) std::ofstream(argv[2]) << suite_json(in, results).dump(2) << "\n";
        std::cout << (ok ? "all criteria passed" : "some criteria failed") << std::endl;
        return ok ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    }
}
