use cv_gksl::experiments::{
    cmd_criterion, cmd_fig1, cmd_fig2, cmd_fig3, cmd_scan, ExperimentConfig, Spacing,
};
use cv_gksl::gravity::{build_generator, critical_r0, GravityScenario, ModelKind};
use cv_gksl::propagator::{en_trajectory, Method, PropagationPlan};
use cv_gksl::symplectic::GaussianState;

fn small(model: ModelKind) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.scenario.model = model;
    if model != ModelKind::Td {
        cfg.scenario.r0_m = None;
    }
    cfg.time_grid.samples = 60;
    cfg.r0_grid.samples = 24;
    cfg
}

#[test]
fn criterion_verdicts() {
    let td = cmd_criterion(&small(ModelKind::Td)).unwrap();
    assert_eq!(td.verdict, "generating");
    assert!((td.d_over_r0.unwrap() - 0.6).abs() < 1e-12);
    assert!((td.critical_ratio - 0.85).abs() < 0.01);

    let naive = cmd_criterion(&small(ModelKind::Naive)).unwrap();
    assert_eq!(naive.verdict, "generating");
    assert_eq!(naive.det_re_kappa, Some(0.0));

    let newton = cmd_criterion(&small(ModelKind::Newton)).unwrap();
    assert_eq!(newton.verdict, "generating");
    assert!(newton.c_squared > 0.0);

    let mut far = small(ModelKind::Td);
    far.scenario.r0_m = Some(2e-4);
    assert_eq!(cmd_criterion(&far).unwrap().verdict, "non-generating");
}

#[test]
fn fig1_shape() {
    let t = cmd_fig1(&small(ModelKind::Newton)).unwrap();
    assert_eq!(t.columns, ["t_s", "en_newton", "en_naive", "rel_diff"]);
    let newton = t.column("en_newton").unwrap();
    let naive = t.column("en_naive").unwrap();
    assert_eq!((newton[0], naive[0]), (0.0, 0.0));
    assert_eq!(t.column("rel_diff").unwrap()[0], 0.0);
    for (n, v) in newton.iter().zip(&naive) {
        assert!(v <= n, "naive {v} exceeds newton {n}");
    }
    for w in newton.windows(2) {
        assert!(w[1] >= w[0]);
    }
}

#[test]
fn fig2_matches_fig1_and_orders_curves() {
    let mut cfg = small(ModelKind::Td);
    cfg.fig2.bottom_times_s = vec![0.8, 4.7, 10.0];
    let (top, bottom) = cmd_fig2(&cfg).unwrap();
    assert_eq!(
        top.columns,
        ["t_s", "en_newton", "en_td_r0_0.003", "en_td_r0_0.0005", "en_td_r0_0.00037"]
    );
    assert_eq!(bottom.columns, ["r0_m", "en_t0.8", "en_t4.7", "en_t10"]);
    assert_eq!(bottom.rows.len(), cfg.r0_grid.samples);

    let mut f1 = cfg.clone();
    f1.scenario.model = ModelKind::Newton;
    f1.scenario.r0_m = None;
    let fig1 = cmd_fig1(&f1).unwrap();
    assert_eq!(fig1.column("en_newton"), top.column("en_newton"));

    let last = top.rows.len() - 1;
    assert_eq!(top.column("t_s").unwrap()[last], 10.0);
    // smearing damps the coupling as (d/R0)³, so the widest mass is weakest
    let at = |col: &str| top.column(col).unwrap()[last];
    let (wide, mid, near) = (at("en_td_r0_0.003"), at("en_td_r0_0.0005"), at("en_td_r0_0.00037"));
    assert!(wide < near && wide < mid, "{wide} {mid} {near}");
    assert!(near < at("en_newton"));
}

#[test]
fn fig3_flags() {
    let mut cfg = small(ModelKind::Td);
    cfg.r0_grid.min_m = 1e-4;
    cfg.r0_grid.samples = 40;
    let t = cmd_fig3(&cfg).unwrap();
    assert_eq!(t.columns, ["r0_m", "en_t13", "en_t15", "compatible_t13", "compatible_t15"]);
    let r0 = t.column("r0_m").unwrap();
    let rc = critical_r0(cfg.scenario.distance_m).unwrap();
    for col in ["compatible_t13", "compatible_t15"] {
        let flags = t.column(col).unwrap();
        for (r, f) in r0.iter().zip(&flags) {
            assert!(!(*r < rc && *f == 1.0), "R0 = {r} below critical is flagged");
        }
        let rises = flags.windows(2).filter(|w| w[0] == 0.0 && w[1] == 1.0).count()
            + usize::from(flags[0] == 1.0);
        assert!(rises <= 2, "{col}: {rises} intervals");
    }

    cfg.fig3.band_halfwidth = 0.0;
    let empty = cmd_fig3(&cfg).unwrap();
    for col in ["compatible_t13", "compatible_t15"] {
        assert!(empty.column(col).unwrap().iter().all(|&f| f == 0.0));
    }
}

#[test]
fn scan_properties() {
    let mut cfg = small(ModelKind::Td);
    cfg.r0_grid.min_m = 1e-4;
    cfg.r0_grid.max_m = 3e-4;
    cfg.r0_grid.samples = 5;
    let t = cmd_scan(&cfg).unwrap();
    assert_eq!(t.columns, ["r0_m", "t_s", "en"]);
    assert!(t.column("en").unwrap().iter().all(|&e| e == 0.0));

    let mut one = small(ModelKind::Td);
    one.time_grid.samples = 1;
    one.time_grid.t_max_s = 3.0;
    one.r0_grid.samples = 1;
    one.r0_grid.min_m = 5e-4;
    let t = cmd_scan(&one).unwrap();
    assert_eq!(t.rows.len(), 1);
    let scn = GravityScenario::reference(ModelKind::Td).with_r0(5e-4);
    let plan = PropagationPlan::new(Method::LocalFrameRk, vec![scn.omega * 3.0])
        .unwrap()
        .with_tolerances(cv_gksl::experiments::CURVE_TOLERANCES);
    let direct = en_trajectory(&build_generator(&scn).unwrap(), &GaussianState::vacuum(2), &plan).unwrap();
    assert_eq!(t.column("en").unwrap()[0], direct[0].1);

    let mut newton = small(ModelKind::Newton);
    newton.r0_grid.samples = 1;
    newton.time_grid.spacing = Spacing::Linear;
    let en = cmd_scan(&newton).unwrap().column("en").unwrap();
    for w in en.windows(2) {
        assert!(w[1] >= w[0]);
    }
}

#[test]
fn scan_is_independent_of_thread_count() {
    let mut cfg = small(ModelKind::Td);
    cfg.r0_grid.samples = 8;
    cfg.time_grid.samples = 20;
    let run = |n: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        pool.install(|| cmd_scan(&cfg).unwrap().to_csv())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn regime_guard_refuses_long_runs() {
    let mut cfg = small(ModelKind::Td);
    cfg.time_grid.t_max_s = 1e9;
    let err = cmd_scan(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}
