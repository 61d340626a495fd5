import collections
import io

import numpy as np
import pytest

from fraktur.mesh import (
    PRESETS,
    BoundaryTag,
    DomainSpec,
    MeshFormatError,
    boundary_nodes,
    build_slit_domain,
    example1,
    example2,
    example3,
    read_mesh,
    single_slit,
    write_mesh,
)


@pytest.fixture(scope="module")
def desk_mesh():
    return build_slit_domain(single_slit(a=1.0, ell=0.08, h_min=0.02, h_max=0.08))


def adjacency(mesh):
    adj = collections.defaultdict(set)
    for t in mesh.triangles:
        for i in range(3):
            a, b = int(t[i]), int(t[(i + 1) % 3])
            adj[a].add(b)
            adj[b].add(a)
    return adj


class TestDomainSpec:
    def test_uniform_spec_allowed(self):
        DomainSpec(a=0.5, h_min=0.25, h_max=0.25)

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            DomainSpec(a=1.0, h_min=0.2, h_max=0.1)

    def test_rejects_slit_on_corner(self):
        with pytest.raises(ValueError):
            DomainSpec(a=1.0, h_min=0.1, h_max=0.1, slits=(((2.0, 2.0), (2.0, 1.0)),))

    def test_rejects_coarse_h_vs_slit(self):
        with pytest.raises(ValueError):
            DomainSpec(a=1.0, h_min=0.6, h_max=0.6, slits=(((1.0, 1.5), (1.0, 2.0)),))

    def test_rejects_boundary_slit(self):
        with pytest.raises(ValueError):
            DomainSpec(a=1.0, h_min=0.1, h_max=0.1, slits=(((0.0, 0.5), (0.0, 1.5)),))

    def test_rejects_oblique_slit(self):
        with pytest.raises(ValueError):
            DomainSpec(a=1.0, h_min=0.1, h_max=0.1, slits=(((0.5, 0.5), (1.0, 1.0)),))


class TestUniformMesh:
    def test_uniform_sizing_and_tags(self):
        mesh = build_slit_domain(DomainSpec(a=0.5, h_min=0.25, h_max=0.25))
        assert mesh.edge_lengths().max() <= 0.375
        assert mesh.signed_areas().sum() == pytest.approx(1.0, rel=1e-12)
        free = boundary_nodes(mesh, BoundaryTag.FREE)
        corners = {(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)}
        free_coords = {tuple(mesh.vertices[i]) for i in free}
        assert corners <= free_coords

    def test_empty_declared_tag(self):
        mesh = build_slit_domain(DomainSpec(a=0.5, h_min=0.25, h_max=0.25))
        assert boundary_nodes(mesh, BoundaryTag.DIRICHLET_MINUS) == set()

    def test_unknown_tag_rejected(self):
        mesh = build_slit_domain(DomainSpec(a=0.5, h_min=0.25, h_max=0.25))
        with pytest.raises(KeyError):
            boundary_nodes(mesh, "NotATag")


class TestSingleSlitPreset:
    def test_area_excludes_nothing(self, desk_mesh):
        assert desk_mesh.signed_areas().sum() == pytest.approx(4.0, rel=1e-10)

    def test_min_angle(self, desk_mesh):
        assert desk_mesh.min_angle_deg() >= 20.0

    def test_slit_tip_is_vertex(self, desk_mesh):
        d = np.linalg.norm(desk_mesh.vertices - np.array([1.0, 1.5]), axis=1)
        assert d.min() < 1e-12

    def test_seam_nodes_duplicated(self, desk_mesh):
        assert len(desk_mesh.seam_pairs) > 0
        for a, b in desk_mesh.seam_pairs:
            np.testing.assert_array_equal(desk_mesh.vertices[a], desk_mesh.vertices[b])

    def test_dirichlet_node_geometry(self, desk_mesh):
        dm = boundary_nodes(desk_mesh, BoundaryTag.DIRICHLET_MINUS)
        dp = boundary_nodes(desk_mesh, BoundaryTag.DIRICHLET_PLUS)
        assert dm and dp and not (dm & dp)
        assert all(desk_mesh.vertices[i, 1] == 2.0 and desk_mesh.vertices[i, 0] < 1.0 for i in dm)
        assert all(desk_mesh.vertices[i, 1] == 2.0 and desk_mesh.vertices[i, 0] > 1.0 for i in dp)

    def test_slit_mouth_excluded_from_dirichlet(self, desk_mesh):
        both = boundary_nodes(desk_mesh, BoundaryTag.DIRICHLET_MINUS) | boundary_nodes(
            desk_mesh, BoundaryTag.DIRICHLET_PLUS
        )
        mouth = np.nonzero(
            (desk_mesh.vertices[:, 0] == 1.0) & (desk_mesh.vertices[:, 1] == 2.0)
        )[0]
        assert len(mouth) == 2  # duplicated
        assert not (set(mouth.tolist()) & both)

    def test_twins_not_adjacent(self, desk_mesh):
        adj = adjacency(desk_mesh)
        for a, b in desk_mesh.seam_pairs:
            assert int(b) not in adj[int(a)]

    def test_crossing_requires_path_around_tip(self, desk_mesh):
        # BFS graph distance between one twin pair must exceed 1
        adj = adjacency(desk_mesh)
        a, b = (int(v) for v in desk_mesh.seam_pairs[0])
        frontier, seen, dist = {a}, {a}, 0
        while b not in frontier and dist < 50:
            frontier = {n for f in frontier for n in adj[f]} - seen
            seen |= frontier
            dist += 1
        assert dist > 1

    def test_in_band_sizing(self):
        spec = single_slit(a=1.0, ell=0.04)  # h_min = ell/5 = 0.008
        mesh = build_slit_domain(spec)
        cent = mesh.vertices[mesh.triangles].mean(axis=1)
        from fraktur.mesh import _point_in_polygon

        inband = np.array([_point_in_polygon(x, y, spec.refinement_band) for x, y in cent])
        p = mesh.vertices[mesh.triangles]
        edges = np.stack([np.linalg.norm(p[:, (i + 1) % 3] - p[:, i], axis=1) for i in range(3)], axis=1)
        med = np.median(edges[inband].ravel())
        assert 0.004 <= med <= 0.012
        longest = edges.max(axis=1)
        assert longest[inband].max() <= 1.5 * spec.h_min
        assert longest[~inband].max() <= 1.5 * spec.h_max

    def test_determinism(self):
        spec = single_slit(a=1.0, ell=0.16, h_min=0.04, h_max=0.16)
        m1 = build_slit_domain(spec)
        m2 = build_slit_domain(spec)
        np.testing.assert_array_equal(m1.vertices, m2.vertices)
        np.testing.assert_array_equal(m1.triangles, m2.triangles)
        assert m1.boundary_tags == m2.boundary_tags


class TestOtherPresets:
    @pytest.mark.parametrize("name,n_slits", [("example1", 1), ("example2", 2), ("example3", 2)])
    def test_build_and_validate(self, name, n_slits):
        spec = PRESETS[name](a=1.0, ell=0.16, h_min=0.08, h_max=0.16)
        assert len(spec.slits) == n_slits
        mesh = build_slit_domain(spec)
        assert mesh.signed_areas().sum() == pytest.approx(4.0, rel=1e-10)
        assert len(mesh.seam_pairs) > 0

    def test_example3_lateral_mouths_open(self):
        mesh = build_slit_domain(example3(a=1.0, ell=0.16, h_min=0.08, h_max=0.16))
        left_mouth = np.nonzero((mesh.vertices[:, 0] == 0.0) & (mesh.vertices[:, 1] == 1.0))[0]
        assert len(left_mouth) == 2


class TestMeshIO:
    def test_round_trip_bit_exact(self, desk_mesh):
        buf = io.StringIO()
        write_mesh(desk_mesh, buf)
        buf.seek(0)
        again = read_mesh(buf)
        np.testing.assert_array_equal(desk_mesh.vertices, again.vertices)
        np.testing.assert_array_equal(desk_mesh.triangles, again.triangles)
        np.testing.assert_array_equal(desk_mesh.boundary_edges, again.boundary_edges)
        np.testing.assert_array_equal(desk_mesh.seam_pairs, again.seam_pairs)
        assert desk_mesh.boundary_tags == again.boundary_tags

    def test_seam_vertex_count_preserved(self, desk_mesh):
        buf = io.StringIO()
        write_mesh(desk_mesh, buf)
        buf.seek(0)
        assert read_mesh(buf).n_vertices == desk_mesh.n_vertices

    def test_truncated_file_names_missing_section(self):
        mesh = build_slit_domain(DomainSpec(a=0.5, h_min=0.25, h_max=0.25))
        buf = io.StringIO()
        write_mesh(mesh, buf)
        text = buf.getvalue()
        cut = text[: text.index("$SeamPairs")]
        with pytest.raises(MeshFormatError, match="SeamPairs"):
            read_mesh(io.StringIO(cut))

    def test_malformed_line_reports_number(self):
        bad = (
            "$Vertices\n0 0.0 0.0\n1 bad-line\n$EndVertices\n"
            "$Triangles\n$EndTriangles\n$BoundaryEdges\n$EndBoundaryEdges\n"
            "$SeamPairs\n$EndSeamPairs\n"
        )
        with pytest.raises(MeshFormatError, match="line 3"):
            read_mesh(io.StringIO(bad))

    def test_unterminated_section(self):
        with pytest.raises(MeshFormatError, match="not terminated"):
            read_mesh(io.StringIO("$Vertices\n0 0.0 0.0\n"))
