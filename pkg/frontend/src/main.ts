/** Bootstrap: wires the API client, state transitions, and renderers. */

import { ApiClient, ApiError, type ReportPayload } from "./api.js";
import { renderItem, renderQueue, renderReport } from "./render.js";
import {
  beginSubmission,
  initialView,
  nextItem,
  openItem,
  setFilter,
  submissionFailed,
  submissionSucceeded,
  switchTab,
  validatePostEdit,
  withQueuePage,
  type QueueView,
  type Tab,
} from "./state.js";

const api = new ApiClient();
let view: QueueView = initialView();
let report: ReportPayload | null = null;

const app = document.getElementById("app")!;

function render(): void {
  app.replaceChildren();
  const tabs = document.createElement("nav");
  for (const tab of ["queue", "item", "report"] as Tab[]) {
    const button = document.createElement("button");
    button.textContent = tab;
    button.className = view.tab === tab ? "tab active" : "tab";
    button.onclick = () => {
      view = switchTab(view, tab);
      if (tab === "report") void refreshReport();
      render();
    };
    tabs.append(button);
  }
  app.append(tabs);

  if (view.tab === "queue") {
    app.append(
      renderQueue(
        view,
        (item) => {
          view = openItem(view, item);
          render();
        },
        (category) => {
          view = setFilter(view, category);
          void refreshQueue();
        },
      ),
    );
  } else if (view.tab === "item") {
    app.append(
      renderItem(view, {
        onPolarity: (tokenIndex, polarity) => void submitPolarity(tokenIndex, polarity),
        onPostEdit: (text) => void submitPostEdit(text),
        onBack: () => {
          view = switchTab(view, "queue");
          render();
        },
      }),
    );
  } else {
    app.append(renderReport(report));
  }
}

async function refreshQueue(): Promise<void> {
  const page = await api.getQueue(view.categoryFilter ?? undefined, view.pageNumber);
  view = withQueuePage(view, page);
  render();
}

async function refreshReport(): Promise<void> {
  report = await api.getReport();
  render();
}

async function submitPolarity(tokenIndex: number, polarity: "POS" | "NEG"): Promise<void> {
  const item = view.activeItem;
  const started = beginSubmission(view);
  if (!item || started === null) return; // duplicate post suppressed
  view = started;
  render();
  try {
    await api.submitAnnotation(item.flag.item_id, {
      kind: "polarity_tag",
      annotator: annotatorName(),
      token_index: tokenIndex,
      polarity,
    });
    const refreshed = await api.getItem(item.flag.item_id);
    view = submissionSucceeded(view, refreshed);
    const following = nextItem(view);
    if (following) view = openItem(view, following);
  } catch (e) {
    view = submissionFailed(view, e instanceof ApiError ? e.message : String(e));
  }
  render();
}

async function submitPostEdit(text: string): Promise<void> {
  const item = view.activeItem;
  const invalid = validatePostEdit(text);
  if (invalid) {
    view = submissionFailed(view, invalid);
    render();
    return;
  }
  const started = beginSubmission(view);
  if (!item || started === null) return;
  view = started;
  render();
  try {
    await api.submitAnnotation(item.flag.item_id, {
      kind: "post_edit",
      annotator: annotatorName(),
      edited_target: text,
    });
    const refreshed = await api.getItem(item.flag.item_id);
    view = submissionSucceeded(view, refreshed);
    await refreshReport();
  } catch (e) {
    view = submissionFailed(view, e instanceof ApiError ? e.message : String(e));
  }
  render();
}

function annotatorName(): string {
  return localStorage.getItem("annotator") ?? "annotator";
}

void refreshQueue();
render();
