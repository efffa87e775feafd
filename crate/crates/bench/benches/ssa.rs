use criterion::{criterion_group, criterion_main, Criterion};

use chemneuron::crn::{replicate_rng, BolusSchedule, Simulator};
use chemneuron::dsl::parse_network;
use chemneuron::experiments::{task_config, InputSpec, Task};
use chemneuron::model::build_basic_cn;
use chemneuron::stimulus::generate_schedule;

fn birth_death(c: &mut Criterion) {
    let net = parse_network("species X = 10\n -> X @ 10\nX -> @ 1\n").unwrap();
    c.bench_function("birth_death_t100", |b| {
        let mut seed = 0;
        b.iter(|| {
            seed += 1;
            let mut sim = Simulator::new(&net, replicate_rng(seed, 0));
            sim.run(&BolusSchedule::empty(), 100.0, &mut ()).unwrap();
            sim.counts()[0]
        })
    });
}

fn neuron_tc2(c: &mut Criterion) {
    let cn = build_basic_cn(&task_config(5, 8)).unwrap();
    let processes = Task::Tc(2).processes(cn.num_channels(), &InputSpec::default()).unwrap();
    let schedule = generate_schedule(&processes, &cn.precursors(), cn.bolus_size, 10.0, 1).unwrap();
    let mut group = c.benchmark_group("neuron");
    group.sample_size(20);
    group.bench_function("tc2_m5_t10", |b| {
        b.iter(|| {
            let mut sim = Simulator::new(&cn.spec, replicate_rng(1, 0));
            sim.run(&schedule, 10.0, &mut ()).unwrap();
            sim.counts().iter().sum::<u64>()
        })
    });
    group.finish();
}

criterion_group!(benches, birth_death, neuron_tc2);
criterion_main!(benches);
