#include "debtrun_cli/commands.hpp"

int main(int argc, char** argv) {
    return debtrun::cli::run_cli(argc, argv);
}
