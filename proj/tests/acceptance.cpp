#include <cstdio>
#include <cstdlib>

#include "flamefront/flamefront.h"

// Prints one PASS/FAIL line per acceptance criterion. Usage:
//   flamefront_acceptance [quick|full] [fixtures] [jobs]

namespace {

void print_line(const char* line, void*) {
    std::printf("%s\n", line);
    std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
    const char* level = argc > 1 ? argv[1] : "full";
    const char* fixtures = argc > 2 ? argv[2] : FLAMEFRONT_FIXTURES;
    const int jobs = argc > 3 ? std::atoi(argv[3]) : 0;
    std::printf("acceptance level %s\n", level);
    const ff_status st = ff_verify(level, fixtures, jobs, print_line, nullptr);
    if (st == FF_OK) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %s\n", ff_last_error());
    return 1;
}
