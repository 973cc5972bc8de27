// App bootstrap: hash routing between the explorer, record pages, and the
// moderation dashboard. View state round-trips through the URL so links are
// shareable; all mutations go through the governance endpoints.

import { AtlasApi } from './api.js';
import { ExplorerController } from './explorer.js';
import { ModerationController } from './moderation.js';
import { RecordPageController } from './recordPage.js';
import { renderExplorer, renderModeration, renderRecordPage } from './render.js';
import type { FilterQuery } from './types.js';
import { decodeViewState, encodeViewState, type ViewState } from './urlState.js';

interface AtlasConfig {
  apiBase: string;
  baseMapUrl: string; // build-time raster source; empty renders a graticule
}

declare global {
  interface Window {
    ATLAS_CONFIG?: Partial<AtlasConfig>;
  }
}

const config: AtlasConfig = {
  apiBase: window.ATLAS_CONFIG?.apiBase ?? 'http://127.0.0.1:8080',
  baseMapUrl: window.ATLAS_CONFIG?.baseMapUrl ?? '',
};

const api = new AtlasApi(config.apiBase);
const root = document.getElementById('app')!;

let viewState: ViewState = decodeViewState(window.location.hash);

const explorer = new ExplorerController(api, (state) => {
  if (currentRoute() === 'atlas') {
    root.innerHTML = renderExplorer(state, config.baseMapUrl);
    wireExplorer();
  }
});

const recordPage = new RecordPageController(api, (state) => {
  if (currentRoute() === 'record') {
    root.innerHTML = renderRecordPage(state);
    wireRecordPage();
  }
});

const moderation = new ModerationController(api, (state) => {
  if (currentRoute() === 'moderation') {
    root.innerHTML = renderModeration(state);
    wireModeration();
  }
});

function currentRoute(): 'atlas' | 'record' | 'moderation' {
  const hash = window.location.hash;
  if (hash.startsWith('#record/')) return 'record';
  if (hash.startsWith('#moderation')) return 'moderation';
  return 'atlas';
}

function pushViewState(): void {
  const encoded = encodeViewState(viewState);
  if (window.location.hash !== encoded) {
    history.replaceState(null, '', encoded);
  }
}

async function route(): Promise<void> {
  const kind = currentRoute();
  if (kind === 'record') {
    const id = decodeURIComponent(window.location.hash.slice('#record/'.length));
    await recordPage.load(id);
    return;
  }
  if (kind === 'moderation') {
    root.innerHTML = renderModeration(moderation.state);
    wireModeration();
    return;
  }
  viewState = decodeViewState(window.location.hash);
  explorer.state = { ...explorer.state, viewport: viewState.viewport, selectedRecordId: viewState.selectedRecordId };
  await explorer.applyFilters(viewState.filters);
}

// -- wiring ------------------------------------------------------------------

function readFilters(form: HTMLFormElement): FilterQuery {
  const filters: FilterQuery = {};
  form.querySelectorAll<HTMLInputElement | HTMLSelectElement>('[data-filter-key]').forEach((el) => {
    const key = el.dataset.filterKey as keyof FilterQuery;
    if (el.value) filters[key] = el.value;
  });
  return filters;
}

function wireExplorer(): void {
  const form = document.getElementById('filter-form') as HTMLFormElement | null;
  form?.addEventListener('submit', (event) => {
    event.preventDefault();
    viewState = { ...viewState, filters: readFilters(form) };
    pushViewState();
    void explorer.applyFilters(viewState.filters);
  });
  document.querySelectorAll<SVGElement>('.marker').forEach((marker) => {
    marker.addEventListener('click', () => {
      const id = marker.dataset.recordId;
      if (id) window.location.hash = `#record/${encodeURIComponent(id)}`;
    });
  });
  document.querySelectorAll<HTMLButtonElement>('[data-zoom]').forEach((button) => {
    button.addEventListener('click', () => {
      const factor = button.dataset.zoom === 'in' ? 1.5 : 1 / 1.5;
      const zoom = Math.min(12, Math.max(0.5, explorer.state.viewport.zoom * factor));
      viewState = { ...viewState, viewport: { ...explorer.state.viewport, zoom } };
      pushViewState();
      explorer.setViewport(viewState.viewport);
    });
  });
}

function wireRecordPage(): void {
  const dispute = document.getElementById('dispute-form') as HTMLFormElement | null;
  dispute?.addEventListener('submit', (event) => {
    event.preventDefault();
    const data = new FormData(dispute);
    void recordPage.submitDispute(
      String(data.get('claim') ?? ''),
      String(data.get('link') ?? ''),
      String(data.get('author') ?? ''),
    );
  });
  const annotation = document.getElementById('annotation-form') as HTMLFormElement | null;
  annotation?.addEventListener('submit', (event) => {
    event.preventDefault();
    const data = new FormData(annotation);
    void recordPage.submitAnnotation(
      String(data.get('body') ?? ''),
      String(data.get('author') ?? ''),
      String(data.get('link') ?? ''),
    );
  });
  const redaction = document.getElementById('redaction-form') as HTMLFormElement | null;
  redaction?.addEventListener('submit', (event) => {
    event.preventDefault();
    const data = new FormData(redaction);
    const fields = String(data.get('fields') ?? '')
      .split(',')
      .map((part) => part.trim())
      .filter(Boolean);
    void recordPage.submitRedaction(fields, String(data.get('reason') ?? ''));
  });
}

function wireModeration(): void {
  const tokenForm = document.getElementById('token-form') as HTMLFormElement | null;
  tokenForm?.addEventListener('submit', (event) => {
    event.preventDefault();
    const token = String(new FormData(tokenForm).get('token') ?? '');
    moderation.setToken(token);
    void moderation.openTab(moderation.state.tab);
  });
  document.querySelectorAll<HTMLButtonElement>('.tab').forEach((tabButton) => {
    tabButton.addEventListener('click', () => {
      void moderation.openTab(tabButton.dataset.tab as never);
    });
  });
  document.querySelectorAll<HTMLFormElement>('.decision-form').forEach((form) => {
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      const submitter = (event as SubmitEvent).submitter as HTMLButtonElement | null;
      const decision = submitter?.dataset.decision ?? '';
      const reason = String(new FormData(form).get('reason') ?? '');
      const itemId = form.dataset.itemId ?? '';
      const tab = moderation.state.tab;
      if (tab === 'intake') void moderation.decideIntake(itemId, decision as never, reason);
      else if (tab === 'disputes') void moderation.resolveDispute(itemId, decision as never, reason);
      else if (tab === 'redactions') void moderation.decideRedaction(itemId, decision as never, reason);
      else void moderation.decideProposal(itemId, decision as never, reason);
    });
  });
}

window.addEventListener('hashchange', () => void route());
void route();
