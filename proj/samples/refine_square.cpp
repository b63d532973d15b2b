// Refines the unit square on 4 workers and prints the mesh statistics.
#include <taskweave/taskweave.hpp>

#include <cstdio>

int main()
{
    using namespace taskweave;
    Scheduler scheduler(4);
    WorkStealingBackend backend(scheduler);

    Mesh mesh = init_mesh(Rect{{0.0, 0.0}, {1.0, 1.0}}, backend.num_threads());
    insert_random_points(mesh, 16, 42);
    const RefineStats st = run_refinement(backend, mesh, RefineCriteria{1e-3, 0.0});

    const auto report = check_structure(mesh);
    std::printf("V=%zu T=%zu E=%zu B=%zu ok=%d rounds=%llu inserted=%llu aborts=%llu violations=%zu\n",
                report.vertices, report.triangles, report.edges, report.boundary_edges, report.ok() ? 1 : 0,
                static_cast<unsigned long long>(st.rounds), static_cast<unsigned long long>(st.inserted),
                static_cast<unsigned long long>(st.aborts), count_delaunay_violations(mesh));
}
