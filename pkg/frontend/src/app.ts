/** Assembles the five coordinated panels over one session store. */

import { ApiClient } from "./api.js";
import { clear, el, num } from "./dom.js";
import { EvaluationPanel } from "./panels/evaluation.js";
import { ImportancePanel } from "./panels/importance.js";
import { ModelsPanel } from "./panels/models.js";
import { ProfilesPanel } from "./panels/profiles.js";
import { SpacePanel } from "./panels/space.js";
import { Store } from "./store.js";

export interface App {
  store: Store;
  panels: {
    models: ModelsPanel;
    importance: ImportancePanel;
    space: SpacePanel;
    profiles: ProfilesPanel;
    evaluation: EvaluationPanel;
  };
}

export async function boot(root: HTMLElement, client: ApiClient): Promise<App> {
  const store = new Store(client);

  const header = el("header", { class: "app-header" }, el("h1", {}, "rulescope explorer"));
  const renderHeader = () => {
    clear(header);
    header.append(el("h1", {}, "rulescope explorer"));
    if (store.meta) {
      header.append(
        el(
          "p",
          { class: "session-line" },
          `${store.meta.source.path} → ${store.meta.source.target}`,
          " · train ",
          num(store.meta.n_train),
          " / test ",
          num(store.meta.n_test),
          " · session ",
          el("code", { class: "fingerprint" }, store.fingerprint),
        ),
      );
    }
  };
  store.subscribe("meta", renderHeader);
  store.subscribe("fingerprint", renderHeader);

  const panels = {
    models: new ModelsPanel(store),
    importance: new ImportancePanel(store),
    space: new SpacePanel(store),
    profiles: new ProfilesPanel(store),
    evaluation: new EvaluationPanel(store),
  };

  clear(root);
  root.append(
    header,
    panels.models.root,
    panels.importance.root,
    panels.space.root,
    panels.profiles.root,
    panels.evaluation.root,
  );

  await store.init();
  return { store, panels };
}
