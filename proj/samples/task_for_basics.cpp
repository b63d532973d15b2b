// Squares a vector in parallel with each task-creation strategy.
#include <taskweave/taskweave.hpp>

#include <cstdio>
#include <vector>

int main()
{
    taskweave::Scheduler scheduler(4);
    taskweave::WorkStealingBackend backend(scheduler);

    std::vector<double> values(100000);
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = static_cast<double>(i);

    using taskweave::Strategy;
    for (Strategy s : {Strategy::flat, Strategy::two_level, Strategy::hierarchical, Strategy::sequential}) {
        std::vector<double> out(values.size());
        const auto stats = taskweave::task_for_index(backend, values.size(), [&](std::size_t i) { out[i] = values[i] * values[i]; },
                                                     {.grainsize = 64, .strategy = s});
        std::printf("%-12s tasks=%llu out[99999]=%.0f\n", std::string(taskweave::to_string(s)).c_str(),
                    static_cast<unsigned long long>(stats.tasks_created), out.back());
    }
}
