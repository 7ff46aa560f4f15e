#include "kfp/acceptance.hpp"

int main()
{
    const auto results = kfp::acceptance::run_all();
    return kfp::acceptance::report(results);
}
