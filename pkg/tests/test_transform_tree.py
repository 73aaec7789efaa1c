"""
Unit tests for rigid transforms and the transform tree.
"""

import math
import threading

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from localization import (
    AmbiguousSampleError,
    DisconnectedFramesError,
    ExtrapolationError,
    RigidTransform,
    StampedTransform,
    TransformTree,
    TreeStructureError,
    UnknownFrameError,
    build_tree,
    compose,
    interpolate,
    load_static_transforms,
    transform_point,
)

pytestmark = [pytest.mark.unit, pytest.mark.localization]


def random_transform(rng: np.random.Generator) -> RigidTransform:
    quat = rng.normal(size=4)
    return RigidTransform(translation=tuple(rng.uniform(-5, 5, size=3)), rotation=tuple(quat))


def matrix_apply(xform: RigidTransform, point) -> np.ndarray:
    return (xform.as_matrix() @ np.append(np.asarray(point, dtype=float), 1.0))[:3]


class TestRigidTransform:
    """Test cases for RigidTransform and its operations."""

    def test_identity_leaves_points_unchanged(self):
        """Test that the identity maps a point onto itself."""
        assert transform_point(RigidTransform.identity(), (5, 6, 7)) == (5.0, 6.0, 7.0)

    def test_rotation_is_normalized(self):
        """Test that a non-unit quaternion is renormalized on construction."""
        xform = RigidTransform(rotation=(2.0, 0.0, 0.0, 2.0))
        assert math.isclose(sum(c * c for c in xform.rotation), 1.0, abs_tol=1e-12)

    def test_translation_then_point(self):
        """Test a pure translation applied to the origin."""
        assert transform_point(RigidTransform.from_translation(1, 0, 0), (0, 0, 0)) == (1.0, 0.0, 0.0)

    def test_rotation_plus_translation(self):
        """Test rotZ(180) followed by translate(1,0,0) on (1,0,0)."""
        xform = RigidTransform.from_yaw(180.0, (1.0, 0.0, 0.0))
        result = transform_point(xform, (1, 0, 0))
        np.testing.assert_allclose(result, (0, 0, 0), atol=1e-9)
        np.testing.assert_allclose(result, matrix_apply(xform, (1, 0, 0)), atol=1e-9)

    def test_compose_identities(self):
        """Test composing two identities."""
        result = compose(RigidTransform.identity(), RigidTransform.identity())
        assert result == RigidTransform.identity()

    def test_compose_translations_add(self):
        """Test that pure translations add up."""
        result = compose(RigidTransform.from_translation(1, 0, 0), RigidTransform.from_translation(0, 2, 0))
        np.testing.assert_allclose(result.translation, (1, 2, 0), atol=1e-12)

    def test_compose_rotation_then_translation(self):
        """Test compose(rotZ(90), translate(1,0,0)) maps the origin to (0,1,0)."""
        result = compose(RigidTransform.from_yaw(90.0), RigidTransform.from_translation(1, 0, 0))
        np.testing.assert_allclose(transform_point(result, (0, 0, 0)), (0, 1, 0), atol=1e-9)

    def test_compose_matches_matrix_product(self):
        """Test composition against 4x4 matrices on random transforms."""
        rng = np.random.default_rng(7)
        for _ in range(200):
            a, b = random_transform(rng), random_transform(rng)
            np.testing.assert_allclose(compose(a, b).as_matrix(), a.as_matrix() @ b.as_matrix(), atol=1e-9)

    def test_composition_is_associative(self):
        """Test associativity of composition on random transforms."""
        rng = np.random.default_rng(11)
        for _ in range(200):
            a, b, c = (random_transform(rng) for _ in range(3))
            left = compose(compose(a, b), c)
            right = compose(a, compose(b, c))
            np.testing.assert_allclose(left.as_matrix(), right.as_matrix(), atol=1e-9)
            assert math.isclose(sum(q * q for q in left.rotation), 1.0, abs_tol=1e-9)

    def test_inverse_round_trip(self):
        """Test that a transform composed with its inverse is the identity."""
        rng = np.random.default_rng(3)
        for _ in range(100):
            xform = random_transform(rng)
            np.testing.assert_allclose(compose(xform, xform.inverse()).as_matrix(), np.eye(4), atol=1e-9)

    def test_from_dict_accepts_yaw(self):
        """Test building a transform from yaw degrees."""
        xform = RigidTransform.from_dict({"translation": [1, 2, 3], "yaw_deg": 90})
        np.testing.assert_allclose(transform_point(xform, (1, 0, 0)), (1, 3, 3), atol=1e-9)

    def test_from_dict_rejects_both_rotations(self):
        """Test that rotation and yaw_deg together are refused."""
        with pytest.raises(ValueError):
            RigidTransform.from_dict({"rotation": [1, 0, 0, 0], "yaw_deg": 10})

    def test_stamped_transform_rejects_self_parent(self):
        """Test that a frame cannot be its own parent."""
        with pytest.raises(ValueError):
            StampedTransform("a", "a", 0.0, RigidTransform.identity())


class TestInterpolate:
    """Test cases for temporal interpolation of one edge."""

    def test_translation_midpoint(self):
        """Test linear interpolation of translations."""
        t0 = StampedTransform("p", "c", 0.0, RigidTransform.from_translation(0, 0, 0))
        t1 = StampedTransform("p", "c", 1.0, RigidTransform.from_translation(2, 0, 0))
        np.testing.assert_allclose(interpolate(t0, t1, 0.5).translation, (1, 0, 0), atol=1e-12)

    def test_endpoints_are_exact(self):
        """Test that the endpoints return the stored transforms."""
        rng = np.random.default_rng(5)
        a = StampedTransform("p", "c", 1.0, random_transform(rng))
        b = StampedTransform("p", "c", 2.0, random_transform(rng))
        assert interpolate(a, b, 1.0) == a.xform
        assert interpolate(a, b, 2.0) == b.xform

    def test_rotation_slerp_halfway(self):
        """Test slerp from identity to rotZ(90) at the midpoint gives rotZ(45)."""
        t0 = StampedTransform("p", "c", 0.0, RigidTransform.identity())
        t1 = StampedTransform("p", "c", 1.0, RigidTransform.from_yaw(90.0))
        result = interpolate(t0, t1, 0.5)
        expected = Rotation.from_rotvec([0, 0, math.pi / 4]).as_matrix()
        np.testing.assert_allclose(result.rotation_matrix(), expected, atol=1e-9)

    def test_outside_range_raises(self):
        """Test that t outside the pair raises an extrapolation error."""
        t0 = StampedTransform("p", "c", 0.0, RigidTransform.identity())
        t1 = StampedTransform("p", "c", 1.0, RigidTransform.identity())
        with pytest.raises(ExtrapolationError):
            interpolate(t0, t1, 1.5)

    def test_same_stamp_different_values(self):
        """Test that two different samples at one stamp are ambiguous."""
        t0 = StampedTransform("p", "c", 1.0, RigidTransform.identity())
        t1 = StampedTransform("p", "c", 1.0, RigidTransform.from_translation(1, 0, 0))
        with pytest.raises(AmbiguousSampleError):
            interpolate(t0, t1, 1.0)


class TestTransformTree:
    """Test cases for TransformTree lookups and structure checks."""

    @pytest.fixture
    def tree(self):
        """Create the apartment -> kinect1 -> user1 chain."""
        tree = TransformTree()
        tree.set_static("apartment", "kinect1", RigidTransform.from_translation(3, 0, 0))
        for stamp in (0.0, 1.0, 2.0):
            tree.insert(StampedTransform("kinect1", "kinect1/user1", stamp, RigidTransform.from_translation(1, 1, 0)))
        return tree

    def test_lookup_same_frame_is_identity(self, tree):
        """Test that looking a frame up in itself gives the identity."""
        assert tree.lookup("apartment", "apartment", 12.0) == RigidTransform.identity()

    def test_chain_composition(self, tree):
        """Test the two-edge chain maps the user origin to (4,1,0)."""
        xform = tree.lookup("apartment", "kinect1/user1", 0.5)
        np.testing.assert_allclose(transform_point(xform, (0, 0, 0)), (4, 1, 0), atol=1e-12)

    def test_lookup_reverse_direction(self, tree):
        """Test the inverse lookup maps the apartment origin into the user frame."""
        xform = tree.lookup("kinect1/user1", "apartment", 1.0)
        np.testing.assert_allclose(transform_point(xform, (0, 0, 0)), (-4, -1, 0), atol=1e-12)

    def test_round_trip_is_identity(self, tree):
        """Test compose(lookup(A,B), lookup(B,A)) is the identity."""
        forward = tree.lookup("apartment", "kinect1/user1", 1.3)
        backward = tree.lookup("kinect1/user1", "apartment", 1.3)
        np.testing.assert_allclose(compose(forward, backward).as_matrix(), np.eye(4), atol=1e-9)

    def test_stored_stamp_is_bit_exact(self):
        """Test a lookup at a stored stamp reproduces the stored transform."""
        tree = TransformTree()
        stored = RigidTransform(translation=(0.1, 0.2, 0.3), rotation=(0.9, 0.1, 0.2, 0.3))
        tree.insert(StampedTransform("a", "b", 0.0, RigidTransform.identity()))
        tree.insert(StampedTransform("a", "b", 0.7, stored))
        tree.insert(StampedTransform("a", "b", 1.4, RigidTransform.identity()))
        result = tree.lookup("a", "b", 0.7)
        assert result.translation == stored.translation
        np.testing.assert_allclose(result.rotation, stored.rotation, atol=1e-12)

    def test_clamp_within_margin(self, tree):
        """Test that lookups slightly past the buffer clamp to the end sample."""
        xform = tree.lookup("apartment", "kinect1/user1", 2.4)
        np.testing.assert_allclose(xform.translation, (4, 1, 0), atol=1e-12)

    def test_extrapolation_beyond_margin(self, tree):
        """Test that lookups beyond the margin raise."""
        with pytest.raises(ExtrapolationError):
            tree.lookup("apartment", "kinect1/user1", 2.6)
        assert not tree.can_transform("apartment", "kinect1/user1", 2.6)

    def test_unknown_frame(self, tree):
        """Test that unknown frames raise a lookup error."""
        with pytest.raises(UnknownFrameError):
            tree.lookup("apartment", "kinect9", 0.0)
        with pytest.raises(LookupError):
            tree.lookup("nowhere", "apartment", 0.0)

    def test_disconnected_frames(self, tree):
        """Test frames in separate trees."""
        tree.set_static("garage", "camera", RigidTransform.identity())
        with pytest.raises(DisconnectedFramesError):
            tree.lookup("apartment", "camera", 0.0)

    def test_second_parent_rejected(self, tree):
        """Test that a frame cannot get a second parent."""
        with pytest.raises(TreeStructureError):
            tree.set_static("kinect2", "kinect1/user1", RigidTransform.identity())

    def test_cycle_rejected(self, tree):
        """Test that an edge closing a cycle is refused."""
        with pytest.raises(TreeStructureError):
            tree.set_static("kinect1/user1", "apartment", RigidTransform.identity())

    def test_conflicting_sample_rejected(self, tree):
        """Test that a different transform at an existing stamp is refused."""
        with pytest.raises(AmbiguousSampleError):
            tree.insert(StampedTransform("kinect1", "kinect1/user1", 1.0, RigidTransform.from_translation(0, 0, 0)))

    def test_introspection(self, tree):
        """Test frames, chain and the text dump."""
        assert tree.frames() == {"apartment", "kinect1", "kinect1/user1"}
        assert tree.chain("kinect1/user1") == ["kinect1/user1", "kinect1", "apartment"]
        dump = tree.describe()
        assert dump.splitlines()[0] == "apartment"
        assert "kinect1 (static)" in dump
        assert "3 samples" in dump

    def test_retention_trims_old_samples(self):
        """Test that a streaming tree forgets samples older than its retention."""
        tree = TransformTree(retention=5.0)
        for stamp in range(20):
            tree.insert(StampedTransform("a", "b", float(stamp), RigidTransform.from_translation(stamp, 0, 0)))
        assert not tree.can_transform("a", "b", 2.0)
        np.testing.assert_allclose(tree.lookup("a", "b", 17.5).translation, (17.5, 0, 0), atol=1e-12)

    def test_two_sensor_chain_matches_matrix_oracle(self):
        """Test apartment -> sensor -> user lookups against matrix products on random cases."""
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            tf1, tf2 = random_transform(rng), random_transform(rng)
            tree = TransformTree()
            tree.set_static("apartment", "kinect", tf1)
            tree.set_static("kinect", "kinect/user1", tf2)
            point = rng.uniform(-3, 3, size=3)
            result = transform_point(tree.lookup("apartment", "kinect/user1", 0.0), point)
            expected = (tf1.as_matrix() @ tf2.as_matrix() @ np.append(point, 1.0))[:3]
            np.testing.assert_allclose(result, expected, atol=1e-9)

    def test_concurrent_insert_and_lookup(self):
        """Test inserts and lookups from separate threads."""
        tree = TransformTree()
        tree.set_static("apartment", "kinect1", RigidTransform.identity())
        tree.insert(StampedTransform("kinect1", "kinect1/user1", 0.0, RigidTransform.identity()))
        errors = []

        def writer():
            for k in range(1, 500):
                tree.insert(StampedTransform("kinect1", "kinect1/user1", k * 0.1, RigidTransform.from_translation(k, 0, 0)))

        def reader():
            try:
                for _ in range(500):
                    tree.lookup("apartment", "kinect1/user1", 0.0)
            except Exception as e:
                errors.append(e)

        threads = [threading.Thread(target=writer), threading.Thread(target=reader)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        assert errors == []
        assert tree.lookup("apartment", "kinect1/user1", 49.9).translation[0] == pytest.approx(499.0)


class TestLoader:
    """Test cases for static transform configuration files."""

    def test_load_and_build(self, tmp_path):
        """Test loading static edges and building a tree from them."""
        path = tmp_path / "transforms.json"
        path.write_text(
            '{"root": "apartment", "transforms": ['
            '{"child": "kinect1", "translation": [1, 0, 0], "yaw_deg": 90},'
            '{"parent": "kinect1", "child": "kinect1/user1", "translation": [1, 0, 0]}]}'
        )
        tree = build_tree(load_static_transforms(path))
        point = transform_point(tree.lookup("apartment", "kinect1/user1", 0.0), (0, 0, 0))
        np.testing.assert_allclose(point, (1, 1, 0), atol=1e-9)

    def test_entry_without_child(self, tmp_path):
        """Test that an entry without a child frame is rejected."""
        path = tmp_path / "transforms.json"
        path.write_text('{"transforms": [{"translation": [1, 0, 0]}]}')
        with pytest.raises(ValueError):
            load_static_transforms(path)
