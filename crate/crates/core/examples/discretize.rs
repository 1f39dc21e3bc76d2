//! Fitting cutpoints on training rows and applying them to new data.
//!
//! Run with `cargo run --example discretize`.

use sbfc::dataio::{
    apply_cutpoints, discretize_binary, discretize_mdlp, fit_coding, read_table, ClassColumn, Discretization,
};

const TRAIN: &str = "\
temp,outlook,humid,play
64,overcast,65,yes
65,rainy,70,no
68,rainy,80,yes
69,sunny,70,yes
70,rainy,96,yes
71,rainy,91,no
72,sunny,95,no
72,overcast,90,yes
75,rainy,80,yes
75,sunny,70,yes
80,sunny,90,no
81,overcast,75,yes
83,overcast,86,yes
85,sunny,85,no
";

fn main() -> sbfc::Result<()> {
    // The two discretizers on their own.
    let values = [1.0, 2.0, 3.0, 4.0];
    println!("MDLP cuts for {values:?} with classes [0,0,1,1]: {:?}", discretize_mdlp(&values, &[0, 0, 1, 1]));
    println!("binary cut for [5, 5, 9]: {:?}", discretize_binary(&[5.0, 5.0, 9.0]));

    // A whole table: numeric columns are binned, text columns become categories.
    let table = read_table(TRAIN.as_bytes(), b',', true, &ClassColumn::Name("play".into()))?;
    for mode in [Discretization::Mdlp, Discretization::Binary] {
        let coding = fit_coding(&table, mode)?;
        println!("\n{mode:?} coding:");
        for f in &coding.features {
            println!("  {:<8} arity {}  {:?}", f.name, f.arity, f.coding);
        }
        let data = apply_cutpoints(&table, &coding)?;
        println!("  first row encoded as {:?}, class {}", data.row(0), data.class()[0]);
    }

    // Test rows go through the training coding; unseen categories get a reserved index.
    let coding = fit_coding(&table, Discretization::Mdlp)?;
    let test = read_table(
        "temp,outlook,humid,play\n99,foggy,50,no\n".as_bytes(),
        b',',
        true,
        &ClassColumn::Name("play".into()),
    )?;
    let encoded = apply_cutpoints(&test, &coding)?;
    println!("\nunseen test row encoded as {:?} (outlook arity now {})", encoded.row(0), encoded.arity(1));

    // The side file written next to a model.
    println!("\n{}", serde_json::to_string_pretty(&coding).expect("coding serializes"));
    Ok(())
}
