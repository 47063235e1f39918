#include <string>
#include <vector>

#include <tunedline/cli.hpp>

int main(int argc, char** argv) {
    return tunedline::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
