use misforge_core::graph::{Edge, Graph};
use misforge_core::hardness::GenConfig;
use misforge_core::oracle::{greedy_mis, is_mis};
use misforge_core::streaming::{
    random_graph, run_residual, run_stream, simulate_protocol, simulate_protocol_from_stream,
    BufferedGreedy, EdgeStream, GreedyConfig, Luby, LubyConfig, OrderPolicy, Residual,
    ResidualConfig, SampleSize, StreamAlgorithm, StreamReport,
};
use misforge_core::Budget;
use proptest::prelude::*;

fn check_accounting(report: &StreamReport) {
    assert!(report.passes >= 1);
    assert_eq!(report.pass_peaks.len(), report.passes);
    assert_eq!(report.peak_words, *report.pass_peaks.iter().max().unwrap());
}

fn policies(seed: u64) -> [OrderPolicy; 3] {
    [OrderPolicy::File, OrderPolicy::Random(seed), OrderPolicy::PerPlayer]
}

fn all_runners(g: &Graph, stream: &EdgeStream, seed: u64) {
    let luby = run_stream::<Luby>(&LubyConfig { seed }, stream).unwrap();
    let greedy = run_stream::<BufferedGreedy>(&GreedyConfig { seed }, stream).unwrap();
    let config = ResidualConfig::from_factors(g.num_vertices(), &[4], seed).unwrap();
    let residual = run_stream::<Residual>(&config, stream).unwrap();
    for report in [&luby, &greedy, &residual] {
        check_accounting(report);
        assert!(is_mis(g, &report.output), "{} seed {seed}", report.algorithm);
    }
    assert_eq!(luby.passes % 2, 0);
    assert_eq!(greedy.passes, 1);
    assert_eq!(greedy.peak_words, 2 * g.num_edges());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn runners_output_mis_under_every_order(n in 1usize..40, p in 0.0f64..0.6, seed in any::<u64>()) {
        let g = random_graph(n, p, seed).unwrap();
        let half = g.num_edges() / 2;
        let players = vec![g.edges()[..half].to_vec(), g.edges()[half..].to_vec()];
        for policy in policies(seed) {
            let stream = EdgeStream::with_policy(n, &players, policy).unwrap();
            prop_assert_eq!(stream.edge_set(), g.edges().to_vec());
            all_runners(&g, &stream, seed);
        }
    }

    #[test]
    fn buffered_greedy_ignores_stream_order(n in 1usize..30, p in 0.0f64..0.6, seed in any::<u64>(), shuffle in any::<u64>()) {
        let g = random_graph(n, p, seed).unwrap();
        let a = EdgeStream::new(n, g.edges().to_vec()).unwrap();
        let b = EdgeStream::with_policy(n, &[g.edges().to_vec()], OrderPolicy::Random(shuffle)).unwrap();
        let ra = run_stream::<BufferedGreedy>(&GreedyConfig { seed }, &a).unwrap();
        let rb = run_stream::<BufferedGreedy>(&GreedyConfig { seed }, &b).unwrap();
        prop_assert_eq!(&ra.output, &rb.output);
        prop_assert_eq!(ra.output, greedy_mis(&g, &BufferedGreedy::order(seed, n)));
    }

    #[test]
    fn single_phase_residual_is_buffered_greedy(n in 1usize..30, p in 0.0f64..0.6, seed in any::<u64>()) {
        let g = random_graph(n, p, seed).unwrap();
        let stream = EdgeStream::new(n, g.edges().to_vec()).unwrap();
        let config = ResidualConfig { schedule: vec![SampleSize::All], seed };
        let (residual, log) = run_residual(&config, &stream).unwrap();
        let greedy = run_stream::<BufferedGreedy>(&GreedyConfig { seed }, &stream).unwrap();
        prop_assert_eq!(residual.passes, 1);
        prop_assert_eq!(log[0].stored_edges, g.num_edges());
        prop_assert_eq!(residual.output, greedy.output);
    }

    #[test]
    fn protocol_matches_direct_run(n in 1usize..30, p in 0.0f64..0.6, seed in any::<u64>(), cuts in 1usize..5) {
        let g = random_graph(n, p, seed).unwrap();
        let m = g.num_edges();
        let players: Vec<Vec<Edge>> = (0..cuts)
            .map(|a| g.edges()[a * m / cuts..(a + 1) * m / cuts].to_vec())
            .collect();
        let stream = EdgeStream::from_players(n, &players).unwrap();
        let runs = [
            simulate_protocol::<Luby>(&LubyConfig { seed }, &stream).unwrap(),
            simulate_protocol::<BufferedGreedy>(&GreedyConfig { seed }, &stream).unwrap(),
            simulate_protocol::<Residual>(&ResidualConfig::from_factors(n, &[3], seed).unwrap(), &stream).unwrap(),
        ];
        for run in &runs {
            prop_assert!(run.matches_direct());
            prop_assert!(run.within_bound());
            prop_assert_eq!(run.transcript.num_players(), cuts);
        }
    }
}

#[test]
fn toy_instances_through_every_runner() {
    for seed in 0..10 {
        let inst = GenConfig::toy(2, vec![(1, 1), (1, 1)], seed)
            .generate(&Budget::default())
            .unwrap();
        let g = inst.graph();
        for policy in policies(seed) {
            let stream = EdgeStream::with_policy(inst.num_vertices(), inst.players(), policy).unwrap();
            all_runners(&g, &stream, seed);
        }
        let run = simulate_protocol_from_stream::<Luby>(&LubyConfig { seed }, &inst).unwrap();
        assert_eq!(run.transcript.num_players(), 3);
        assert!(run.matches_direct());
    }
}

#[test]
fn restore_roundtrips_mid_run() {
    // Resuming from a snapshot at every pass boundary reproduces the run.
    let g = random_graph(50, 0.2, 11).unwrap();
    let stream = EdgeStream::new(50, g.edges().to_vec()).unwrap();
    let config = ResidualConfig::from_factors(50, &[10, 3], 5).unwrap();
    let direct = run_stream::<Residual>(&config, &stream).unwrap();
    let mut alg = Residual::init(&config, 50).unwrap();
    let mut pass = 0;
    loop {
        for &e in stream.edges() {
            alg.process(e);
        }
        let done = alg.end_pass() == misforge_core::streaming::PassOutcome::Done;
        pass += 1;
        if done {
            break;
        }
        alg = Residual::restore(&config, 50, pass, &alg.snapshot()).unwrap();
    }
    assert_eq!(pass, direct.passes);
    assert_eq!(alg.output(), direct.output);
}
