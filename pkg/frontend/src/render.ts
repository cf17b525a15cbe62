/** DOM rendering for the three tabs. No state lives in the DOM. */

import type { ContronymOccurrence, QueueItem, ReportPayload } from "./api.js";
import { latestPostEdit, polarityBadge, type QueueView } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function glossTooltip(occ: ContronymOccurrence): string {
  return `${occ.positive_glosses.join("/")} vs ${occ.negative_glosses.join("/")}`;
}

export function renderSource(item: QueueItem): HTMLElement {
  const line = el("p", "source-text");
  line.dir = "rtl";
  line.lang = "ar";
  const byIndex = new Map(item.contronym_occurrences.map((o) => [o.token_index, o]));
  item.source_tokens.forEach((token, i) => {
    const occ = byIndex.get(i);
    const span = el("span", occ ? "token contronym" : "token", token);
    if (occ) {
      span.title = glossTooltip(occ);
      const badge = polarityBadge(item, i);
      if (badge) span.append(el("sup", `badge badge-${badge.toLowerCase()}`, badge));
    }
    line.append(span, document.createTextNode(" "));
  });
  return line;
}

export function renderQueue(
  view: QueueView,
  onOpen: (item: QueueItem) => void,
  onFilter: (category: string | null) => void,
): HTMLElement {
  const root = el("section", "queue");
  const filter = el("select") as HTMLSelectElement;
  for (const c of ["", "Contronym", "Negation", "Idiom", "Diacritic", "DialectExpression", "Unknown"]) {
    const opt = el("option", undefined, c === "" ? "all categories" : c) as HTMLOptionElement;
    opt.value = c;
    filter.append(opt);
  }
  filter.value = view.categoryFilter ?? "";
  filter.onchange = () => onFilter(filter.value || null);
  root.append(filter);

  if (!view.page) {
    root.append(el("p", "empty", "loading queue..."));
    return root;
  }
  root.append(el("p", "count", `${view.page.total} flagged items`));
  const list = el("ul", "queue-list");
  for (const item of view.page.items) {
    const li = el("li", "queue-row");
    const button = el("button", "open", item.flag.item_id);
    button.onclick = () => onOpen(item);
    li.append(
      button,
      el("span", "category", item.flag.primary_category ?? "Unknown"),
      el("span", "direction", item.flag.direction),
      el("span", "rating", `rating ${item.rating}`),
    );
    list.append(li);
  }
  root.append(list);
  return root;
}

export function renderItem(
  view: QueueView,
  handlers: {
    onPolarity: (tokenIndex: number, polarity: "POS" | "NEG") => void;
    onPostEdit: (text: string) => void;
    onBack: () => void;
  },
): HTMLElement {
  const root = el("section", "item");
  const item = view.activeItem;
  if (!item) {
    root.append(el("p", "empty", "no item selected"));
    return root;
  }
  const back = el("button", "back", "back to queue");
  back.onclick = handlers.onBack;
  root.append(back, el("h2", undefined, item.flag.item_id));
  root.append(renderSource(item));

  const score = item.flag.score;
  root.append(
    el("p", "mt-text", item.mt_text ?? "(no machine translation)"),
    el(
      "p",
      "score",
      `sentiment P ${score.positive.toFixed(3)} / N ${score.neutral.toFixed(3)} / ` +
        `neg ${score.negative.toFixed(3)} · rating ${item.rating} · ${item.flag.direction}`,
    ),
  );

  if (item.contronym_occurrences.length > 0) {
    const pane = el("div", "polarity-pane");
    for (const occ of item.contronym_occurrences) {
      const row = el("div", "occurrence");
      row.append(el("span", "lemma", `${occ.lemma} (${glossTooltip(occ)})`));
      for (const polarity of ["POS", "NEG"] as const) {
        const button = el("button", `tag-${polarity.toLowerCase()}`, polarity);
        button.disabled = view.pendingSubmission;
        button.onclick = () => handlers.onPolarity(occ.token_index, polarity);
        row.append(button);
      }
      pane.append(row);
    }
    root.append(pane);
  }

  const editPane = el("div", "postedit-pane");
  const area = el("textarea") as HTMLTextAreaElement;
  area.value = latestPostEdit(item) ?? "";
  area.placeholder = "post-edited reference translation";
  const submit = el("button", "submit-edit", "submit post-edit");
  submit.disabled = view.pendingSubmission;
  submit.onclick = () => handlers.onPostEdit(area.value);
  editPane.append(area, submit);
  root.append(editPane);

  if (view.error) root.append(el("p", "error", view.error));
  return root;
}

export function renderReport(payload: ReportPayload | null): HTMLElement {
  const root = el("section", "report");
  if (!payload) {
    root.append(el("p", "empty", "loading report..."));
    return root;
  }
  const table = el("table", "histogram");
  const head = el("tr");
  for (const h of ["category", "count", "proportion"]) head.append(el("th", undefined, h));
  table.append(head);
  for (const [category, entry] of Object.entries(payload.histogram)) {
    const row = el("tr");
    row.append(
      el("td", undefined, category),
      el("td", undefined, String(entry.count)),
      el("td", undefined, entry.proportion.toFixed(3)),
    );
    table.append(row);
  }
  root.append(table);
  if (payload.report) {
    const r = payload.report;
    root.append(
      el("p", "metrics", `BLEU ${r.bleu.toFixed(2)}`),
      el("p", "metrics", `cost (positive) ${r.cost_positive.toFixed(4)}`),
      el("p", "metrics", `cost (negative) ${r.cost_negative.toFixed(4)}`),
    );
    if (r.word_f1 != null) {
      root.append(el("p", "metrics", `word F1 ${r.word_f1.toFixed(3)}`));
    }
  } else {
    root.append(el("p", "empty", "no evaluable items (references missing)"));
  }
  return root;
}
