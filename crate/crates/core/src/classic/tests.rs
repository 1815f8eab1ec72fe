use super::*;
use crate::transport::{Arc, TransportProblem};

fn complete(d: Vec<f64>, s: Vec<f64>, cost: impl Fn(usize, usize) -> f64) -> TransportProblem {
    let mut arcs = Vec::new();
    for i in 0..d.len() {
        for j in 0..s.len() {
            arcs.push(Arc::new(i, j, cost(i, j)));
        }
    }
    TransportProblem::new(d, s, arcs).unwrap()
}

fn two_by_two() -> AssignmentProblem {
    AssignmentProblem::new(vec![vec![(0, -1.0), (1, -2.0)], vec![(0, -2.0), (1, -1.0)]]).unwrap()
}

#[test]
fn expansion_counts() {
    let p = complete(vec![2.0], vec![2.0], |_, _| -1.0);
    let (ap, map) = expand_to_assignment(&p, DEFAULT_EXPANSION_CAP).unwrap();
    assert_eq!((ap.len(), ap.num_arcs()), (2, 4));
    assert_eq!((map.sink_copies(0), map.source_copies(0)), (2, 2));

    let (a, b) = (3.0, 5.0);
    let twin = complete(vec![a, b + 2.0], vec![b, a + 2.0], |i, j| {
        -1.0 - (i + j) as f64
    });
    let size = predict_expansion(&twin).unwrap();
    let k = (a + b + 2.0) as u64;
    assert_eq!((size.vertices, size.arcs), (2 * k, k * k));
    assert_eq!((size.vertices, size.arcs), (20, 100));
    let (ap, _) = expand_to_assignment(&twin, DEFAULT_EXPANSION_CAP).unwrap();
    assert_eq!((2 * ap.len(), ap.num_arcs()), (20, 100));
}

#[test]
fn expansion_refusals() {
    let frac = complete(vec![1.5], vec![1.5], |_, _| -1.0);
    assert_eq!(
        expand_to_assignment(&frac, DEFAULT_EXPANSION_CAP).unwrap_err(),
        ClassicError::NonIntegerWeights
    );

    let real_cost = complete(vec![1.0], vec![1.0], |_, _| -1.5);
    assert_eq!(
        expand_to_assignment(&real_cost, DEFAULT_EXPANSION_CAP).unwrap_err(),
        ClassicError::NonIntegerCosts
    );

    let big = complete(vec![3.0], vec![3.0], |_, _| -1.0);
    let err = expand_to_assignment(&big, 9 * ARC_BYTES - 1).unwrap_err();
    assert!(matches!(
        err,
        ClassicError::CapExceeded {
            size: ExpansionSize { arcs: 9, .. },
            ..
        }
    ));
    assert!(err.to_string().contains("9 arcs"));
}

#[test]
fn assignment_auction_examples() {
    let one = AssignmentProblem::new(vec![vec![(0, -4.0)]]).unwrap();
    assert_eq!(
        assignment_auction(&one, 1.0).unwrap().assignment,
        vec![Some(0)]
    );

    let sol = assignment_auction(&two_by_two(), 0.4).unwrap();
    assert_eq!(sol.assignment, vec![Some(0), Some(1)]);
    assert_eq!(sol.cost(&two_by_two()), -2.0);
}

#[test]
fn similar_objects_matches_assignment_on_singleton_classes() {
    let ap = AssignmentProblem::new(vec![
        vec![(0, -3.0), (1, -1.0), (2, -4.0)],
        vec![(0, -1.0), (1, -1.0), (2, -2.0)],
        vec![(0, -2.0), (1, -5.0), (2, -1.0)],
    ])
    .unwrap();
    let a = assignment_auction(&ap, 0.3).unwrap();
    let b = auction_so(&ap, 0.3).unwrap();
    assert_eq!(
        a,
        AssignmentSolution {
            elapsed: a.elapsed,
            ..b
        }
    );

    let one = AssignmentProblem::new(vec![vec![(0, -4.0)]]).unwrap();
    assert_eq!(auction_so(&one, 1.0).unwrap().assignment, vec![Some(0)]);

    let p = complete(vec![1.0, 1.0], vec![1.0, 1.0], |i, j| {
        if i == j {
            -1.0
        } else {
            -2.0
        }
    });
    let (ap, _) = expand_to_assignment(&p, DEFAULT_EXPANSION_CAP).unwrap();
    assert_eq!(
        auction_so(&ap, 0.4).unwrap().assignment,
        assignment_auction(&ap, 0.4).unwrap().assignment
    );
}

#[test]
fn similar_persons_examples() {
    let p = complete(vec![3.0], vec![3.0], |_, _| -2.0);
    let (ap, map) = expand_to_assignment(&p, DEFAULT_EXPANSION_CAP).unwrap();
    let sol = auction_sop(&ap, 0.1).unwrap();
    assert!(sol.assignment.iter().all(Option::is_some));
    assert_eq!(sol.cost(&ap), -6.0);
    assert_eq!(
        collapse_assignment(&sol.assignment, &map)
            .unwrap()
            .flow(0, 0),
        3.0
    );

    let q = complete(vec![1.0, 1.0, 1.0], vec![2.0, 1.0], |i, j| {
        -1.0 - ((i * 2 + j * 3) % 4) as f64
    });
    let (ap, _) = expand_to_assignment(&q, DEFAULT_EXPANSION_CAP).unwrap();
    let eps = 0.9 / 3.0;
    assert_eq!(
        auction_sop(&ap, eps).unwrap().cost(&ap),
        auction_so(&ap, eps).unwrap().cost(&ap)
    );
}

#[test]
fn collapse_examples() {
    let p = complete(vec![2.0], vec![2.0], |_, _| -1.0);
    let (_, map) = expand_to_assignment(&p, DEFAULT_EXPANSION_CAP).unwrap();
    let plan = collapse_assignment(&[Some(1), Some(0)], &map).unwrap();
    assert_eq!(plan.len(), 1);
    assert_eq!(plan.flow(0, 0), 2.0);

    let q = complete(vec![2.0], vec![1.0, 1.0], |_, _| -1.0);
    let (_, map) = expand_to_assignment(&q, DEFAULT_EXPANSION_CAP).unwrap();
    let plan = collapse_assignment(&[Some(0), Some(1)], &map).unwrap();
    assert_eq!((plan.flow(0, 0), plan.flow(0, 1)), (1.0, 1.0));
    assert_eq!(plan.delivered(1), vec![2.0]);

    assert_eq!(
        collapse_assignment(&[Some(0), None], &map).unwrap_err(),
        ClassicError::Incomplete { person: 1 }
    );
}

#[test]
fn infeasible_assignment_is_rejected() {
    let ap = AssignmentProblem::new(vec![vec![(0, -1.0)], vec![(0, -1.0)]]).unwrap();
    assert_eq!(
        assignment_auction(&ap, 0.1).unwrap_err(),
        ClassicError::Infeasible
    );
}
