//! Property tests over the zone algebra and the orders, with generated
//! operation sequences standing in for arbitrary reachable zones.

use proptest::prelude::*;
use zonecheck::order::{JointCmp, JointOrder, TopoOrder};
use zonecheck::zone::{AtomicConstraint, Bound, ClockId, Dbm, LuBounds, RelOp, Valuation};
use zonecheck::ProductState;

#[derive(Clone, Debug)]
enum ZoneOp {
    Constrain {
        clock: usize,
        op: RelOp,
        constant: u64,
    },
    Reset {
        clock: usize,
    },
    Delay,
}

fn rel_op() -> impl Strategy<Value = RelOp> {
    prop_oneof![
        Just(RelOp::Lt),
        Just(RelOp::Le),
        Just(RelOp::Eq),
        Just(RelOp::Ge),
        Just(RelOp::Gt)
    ]
}

fn zone_op(nclocks: usize) -> impl Strategy<Value = ZoneOp> {
    prop_oneof![
        (1..=nclocks, rel_op(), 0..7u64).prop_map(|(clock, op, constant)| ZoneOp::Constrain {
            clock,
            op,
            constant
        }),
        (1..=nclocks).prop_map(|clock| ZoneOp::Reset { clock }),
        Just(ZoneOp::Delay),
    ]
}

fn apply(mut zone: Dbm, ops: &[ZoneOp]) -> Dbm {
    for op in ops {
        zone = match op {
            ZoneOp::Constrain {
                clock,
                op,
                constant,
            } => zone
                .constrain(&AtomicConstraint::new(ClockId::new(*clock), *op, *constant))
                .unwrap_or(zone),
            ZoneOp::Reset { clock } => zone.reset(&[ClockId::new(*clock)]),
            ZoneOp::Delay => zone.delay(),
        };
    }
    zone
}

fn reachable_zone(nclocks: usize) -> impl Strategy<Value = Dbm> {
    (
        prop::bool::ANY,
        prop::collection::vec(zone_op(nclocks), 0..6),
    )
        .prop_map(move |(start, ops)| {
            let zone = if start {
                Dbm::true_zone(nclocks)
            } else {
                Dbm::initial(nclocks)
            };
            apply(zone, &ops)
        })
}

fn lu_bounds(nclocks: usize) -> impl Strategy<Value = LuBounds> {
    prop::collection::vec(
        (prop::option::of(0..6i64), prop::option::of(0..6i64)),
        nclocks,
    )
    .prop_map(move |pairs| {
        let mut lu = LuBounds::new(nclocks);
        for (i, (l, u)) in pairs.into_iter().enumerate() {
            if let Some(l) = l {
                lu.record_lower(ClockId::new(i + 1), l);
            }
            if let Some(u) = u {
                lu.record_upper(ClockId::new(i + 1), u);
            }
        }
        lu
    })
}

proptest! {
    #[test]
    fn canonicalization_is_idempotent(zone in reachable_zone(3)) {
        let dim = zone.dim();
        let entries: Vec<Bound> =
            (0..dim * dim).map(|i| zone.get(i / dim, i % dim)).collect();
        let again = Dbm::from_entries(dim, entries).expect("nonempty stays nonempty");
        prop_assert_eq!(again, zone);
    }

    #[test]
    fn bound_addition_is_commutative_and_monotone(a in -9..9i64, b in -9..9i64, sa in prop::bool::ANY, sb in prop::bool::ANY) {
        let x = if sa { Bound::strict(a) } else { Bound::weak(a) };
        let y = if sb { Bound::strict(b) } else { Bound::weak(b) };
        prop_assert_eq!(x + y, y + x);
        prop_assert!(x + y <= x + Bound::weak(b));
        prop_assert!(x + y <= Bound::INFINITY + y);
    }

    #[test]
    fn inclusion_is_monotone_on_membership(zone in reachable_zone(2), quarters in prop::collection::vec(0..40i64, 2)) {
        let bigger = zone.delay();
        let v = Valuation::from_quarters(quarters);
        prop_assert!(bigger.includes(&zone));
        if zone.contains(&v) {
            prop_assert!(bigger.contains(&v));
        }
    }

    #[test]
    fn widening_is_extensive_idempotent_and_membership_preserving(
        zone in reachable_zone(2),
        lu in lu_bounds(2),
        quarters in prop::collection::vec(0..40i64, 2),
    ) {
        let widened = zone.extrapolate_lu(&lu);
        prop_assert!(widened.includes(&zone));
        prop_assert_eq!(widened.extrapolate_lu(&lu), widened.clone());
        let v = Valuation::from_quarters(quarters);
        if zone.contains(&v) {
            prop_assert!(widened.contains(&v));
        }
    }

    #[test]
    fn guard_intersection_never_grows_the_zone(
        zone in reachable_zone(2),
        clock in 1..=2usize,
        op in rel_op(),
        constant in 0..7u64,
    ) {
        let atom = AtomicConstraint::new(ClockId::new(clock), op, constant);
        if let Some(constrained) = zone.constrain(&atom) {
            prop_assert!(zone.includes(&constrained));
        }
    }

    #[test]
    fn linear_keys_extend_the_joint_order(
        locs_a in prop::collection::vec(0..4usize, 2),
        locs_b in prop::collection::vec(0..4usize, 2),
        seed in prop::option::of(0..64u64),
    ) {
        let net = zonecheck::model::generate::fischer(2).unwrap();
        // Project onto the two protocol processes; the lock has 3 locations.
        let orders: Vec<TopoOrder> = net.processes[..2]
            .iter()
            .map(|p| {
                let mut rng = seed.map(rand::SeedableRng::seed_from_u64);
                TopoOrder::from_dfs(p, rng.as_mut())
            })
            .collect();
        let order = JointOrder::from_orders(orders);
        let a = ProductState(locs_a);
        let b = ProductState(locs_b);
        match order.compare(&a, &b) {
            JointCmp::Less => prop_assert!(order.linear_key(&a) < order.linear_key(&b)),
            JointCmp::Greater => prop_assert!(order.linear_key(&a) > order.linear_key(&b)),
            JointCmp::Equal => prop_assert_eq!(order.linear_key(&a), order.linear_key(&b)),
            JointCmp::Incomparable => {}
        }
    }
}
