//! The World-Bank-style data provider.
//!
//! Types provided under alias `W`:
//!
//! ```text
//! W              static GetDataContext() : W.DataContext
//! W.DataContext  Countries : W.Countries
//! W.Countries    one property per country name : W.Country
//! W.Country      Indicators : W.Indicators
//! W.Indicators   one property per indicator name : series
//! ```
//!
//! Member names are display names; erasure plans carry only codes, so
//! compiled code survives renames but not removals.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::syntax::StaticParam;
use crate::types::{CoreType, TypeId};
use crate::world::{validate_world, Entity, WorldSnapshot};

use super::{
    bool_params, ArgTemplate, ErasurePlan, MemberKind, ProvidedContext, ProvidedMember, ProviderEnv, ProviderFailure,
    Signature, TypeProvider,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DataProviderParams {
    pub asynchronous: bool,
    pub assume_missing_values: bool,
}

impl DataProviderParams {
    pub fn from_static(params: &[StaticParam]) -> Result<Self, ProviderFailure> {
        let map = bool_params("WorldBankData", params, &["Asynchronous", "AssumeMissingValues"])?;
        Ok(DataProviderParams {
            asynchronous: map.get("Asynchronous").copied().unwrap_or(false),
            assume_missing_values: map.get("AssumeMissingValues").copied().unwrap_or(false),
        })
    }

    /// Type of an indicator member.
    pub fn indicator_type(&self) -> CoreType {
        let series = CoreType::series();
        let inner = if self.assume_missing_values {
            CoreType::option(series)
        } else {
            series
        };
        if self.asynchronous {
            CoreType::async_of(inner)
        } else {
            inner
        }
    }
}

pub struct WorldBankProvider;

impl TypeProvider for WorldBankProvider {
    fn name(&self) -> &'static str {
        "WorldBankData"
    }

    fn instantiate(
        &self,
        alias: &str,
        params: &[StaticParam],
        env: &ProviderEnv,
    ) -> Result<ProvidedContext, ProviderFailure> {
        let params = DataProviderParams::from_static(params)?;
        let snapshot = env.world.load()?;
        if let Some(d) = validate_world(&snapshot).first() {
            return Err(ProviderFailure::new(format!("malformed world: {}", d.message)));
        }
        Ok(provide_data_context(alias, snapshot, params))
    }
}

/// Assigns member names to entities. Colliding display names are all
/// disambiguated as `Name (CODE)`.
pub fn member_names(entities: &[Entity]) -> Vec<(String, String)> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for e in entities {
        *counts.entry(e.name.as_str()).or_default() += 1;
    }
    entities
        .iter()
        .map(|e| {
            let name = if counts[e.name.as_str()] > 1 {
                format!("{} ({})", e.name, e.code)
            } else {
                e.name.clone()
            };
            (name, e.code.clone())
        })
        .collect()
}

/// `GetCountries(receiver).GetCountry(code)`.
pub fn erase_country_access(code: &str) -> ErasurePlan {
    ErasurePlan::runtime(
        "GetCountry",
        vec![
            ArgTemplate::Plan(Box::new(ErasurePlan::runtime(
                "GetCountries",
                vec![ArgTemplate::Receiver],
            ))),
            ArgTemplate::Str(code.to_string()),
        ],
    )
}

pub fn erase_indicator_access(code: &str, params: DataProviderParams) -> ErasurePlan {
    let args = vec![ArgTemplate::Receiver, ArgTemplate::Str(code.to_string())];
    match (params.asynchronous, params.assume_missing_values) {
        (false, false) => ErasurePlan::runtime("GetIndicator", args),
        (true, false) => ErasurePlan::runtime("AsyncGetIndicator", args),
        (false, true) => ErasurePlan::runtime("GetIndicatorOpt", args),
        (true, true) => ErasurePlan::runtime(
            "async_return",
            vec![ArgTemplate::Plan(Box::new(ErasurePlan::runtime(
                "GetIndicatorOpt",
                args,
            )))],
        ),
    }
}

pub fn provide_data_context(alias: &str, snapshot: Arc<WorldSnapshot>, params: DataProviderParams) -> ProvidedContext {
    let id = |suffix: &str| TypeId::new(format!("{alias}.{suffix}"));
    let mut ctx = ProvidedContext::new();
    let root = TypeId::new(alias);
    ctx.add_root(alias, root.clone());

    let dc = id("DataContext");
    ctx.add_type(root, alias, {
        let dc = dc.clone();
        move || {
            Ok(vec![ProvidedMember {
                name: "GetDataContext".into(),
                kind: MemberKind::Method,
                is_static: true,
                overloads: vec![Signature {
                    params: Vec::new(),
                    result: CoreType::Named(dc.clone()),
                    erasure: ErasurePlan::JsTemplate {
                        text: "{}".into(),
                        args: Vec::new(),
                    },
                }],
                setter: None,
            }])
        }
    });

    let countries = id("Countries");
    ctx.add_type(dc, "DataContext", {
        let countries = countries.clone();
        move || {
            Ok(vec![ProvidedMember::property(
                "Countries",
                CoreType::Named(countries.clone()),
                ErasurePlan::identity(),
            )])
        }
    });

    let country = id("Country");
    ctx.add_type(countries, "Countries", {
        let snapshot = snapshot.clone();
        let country = country.clone();
        move || {
            Ok(member_names(snapshot.countries())
                .into_iter()
                .map(|(name, code)| {
                    ProvidedMember::property(&name, CoreType::Named(country.clone()), erase_country_access(&code))
                })
                .collect())
        }
    });

    let indicators = id("Indicators");
    ctx.add_type(country, "Country", {
        let indicators = indicators.clone();
        move || {
            Ok(vec![ProvidedMember::property(
                "Indicators",
                CoreType::Named(indicators.clone()),
                ErasurePlan::identity(),
            )])
        }
    });

    ctx.add_type(indicators, "Indicators", move || {
        let ty = params.indicator_type();
        Ok(member_names(snapshot.indicators())
            .into_iter()
            .map(|(name, code)| ProvidedMember::property(&name, ty.clone(), erase_indicator_access(&code, params)))
            .collect())
    });
    ctx
}
