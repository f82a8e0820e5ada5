#include "milburn/harness.hpp"

int main(int argc, char** argv) {
    return milburn::cli_main(argc, argv);
}
