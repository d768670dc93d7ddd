//! Review store and HTTP service: experts correct model annotations, accept
//! sentences, and compare their labels.

pub mod api;
pub mod config;
pub mod store;

use std::sync::Arc;

pub use api::{router, AppState, ANNOTATOR_HEADER};
pub use config::{ConfigError, ServiceConfig};
pub use store::{
    replay_sentence, Agreement, Correction, Event, Field, Outcome, Reference, ReviewState, Status, Store, StoreError,
    StoreState,
};

use cswud_core::evaluation::EquivalenceGroups;

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("equivalence groups {path}: {message}")]
    Groups { path: String, message: String },
    #[error("listen on {addr}: {source}")]
    Bind {
        addr: String,
        #[source]
        source: std::io::Error,
    },
    #[error("server: {0}")]
    Server(std::io::Error),
}

pub fn load_groups(cfg: &ServiceConfig) -> Result<EquivalenceGroups, ServeError> {
    match &cfg.groups {
        None => Ok(EquivalenceGroups::default()),
        Some(p) => EquivalenceGroups::load(p).map_err(|e| ServeError::Groups {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
    }
}

/// Serves `store` until ctrl-c.
pub async fn serve(cfg: &ServiceConfig, store: Store) -> Result<(), ServeError> {
    let state = Arc::new(AppState {
        store,
        groups: load_groups(cfg)?,
    });
    let app = router(state, cfg.ui_dir.as_deref());
    let listener = tokio::net::TcpListener::bind(cfg.listen)
        .await
        .map_err(|source| ServeError::Bind {
            addr: cfg.listen.to_string(),
            source,
        })?;
    log::info!("listening on {}", cfg.listen);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(ServeError::Server)
}
